#include "blochlab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "blochlab/bloch_analysis.hpp"
#include "blochlab/errors.hpp"
#include "blochlab/isometry_lab.hpp"
#include "blochlab/jsonio.hpp"
#include "blochlab/spectrum.hpp"

namespace blochlab {
namespace {

// Bad option values detected after CLI11 parsing; exit 2 like other argv
// problems, as opposed to the library's ValidationError (exit 3).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliConfig {
    std::uint64_t seed = 42;
    int samples = 20000;
    std::string schedule_text = "0.5,0.9,0.99,0.999";
    double tolerance = 1e-9;
    std::string format = "json";
    bool dump_samples = false;
    std::vector<double> schedule;
};

void attach_config(CLI::App* cmd, CliConfig* cfg, bool sampling) {
    cmd->add_option("--seed", cfg->seed, "seed for all randomized procedures, echoed back");
    cmd->add_option("--samples", cfg->samples, "sample budget for estimators");
    cmd->add_option("--schedule", cfg->schedule_text,
                    "comma-separated radius caps, strictly increasing in (0,1)");
    cmd->add_option("--tol", cfg->tolerance, "tolerance for warning-level checks");
    cmd->add_option("--format", cfg->format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    if (sampling)
        cmd->add_flag("--dump-samples", cfg->dump_samples,
                      "include the raw sample cloud in the output for external plotting");
}

void finalize_config(CliConfig& cfg) {
    if (cfg.samples < 1) throw UsageError("config: samples must be at least 1");
    std::stringstream items(cfg.schedule_text);
    std::string item;
    while (std::getline(items, item, ',')) {
        try {
            std::size_t used = 0;
            const double cap = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            cfg.schedule.push_back(cap);
        } catch (const std::logic_error&) {
            throw UsageError("config: malformed radius schedule entry \"" + item + "\"");
        }
    }
    if (cfg.schedule.empty()) throw UsageError("config: radius schedule must be nonempty");
    double prev = 0.0;
    for (double cap : cfg.schedule) {
        if (!(cap > prev && cap < 1.0))
            throw UsageError("config: radius schedule must be strictly increasing inside (0,1)");
        prev = cap;
    }
}

EstimateConfig to_estimate_config(const CliConfig& cfg) {
    EstimateConfig ec;
    ec.samples = cfg.samples;
    ec.seed = cfg.seed;
    ec.radius_schedule = cfg.schedule;
    return ec;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file \"" + path + "\"");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("file \"" + path + "\" is not valid JSON: " + std::string(e.what()));
    }
}

// --point/--from/--u accept the inline grammar directly or a file holding it.
Point read_vector_arg(const std::string& text) {
    std::string body = text;
    if (body.empty() || body.front() != '[') {
        std::ifstream in(text);
        if (!in) throw ValidationError("cannot open vector file \"" + text + "\"");
        std::ostringstream content;
        content << in.rdbuf();
        body = content.str();
    }
    return parse_inline_vector(body);
}

void require_inside(const DomainSpec& spec, const Point& z, const char* what) {
    if (static_cast<int>(z.size()) != spec.dimension())
        throw ValidationError(std::string(what) + ": expected dimension " +
                              std::to_string(spec.dimension()) + ", got " +
                              std::to_string(z.size()));
    if (!contains(spec, z).inside)
        throw ValidationError(std::string(what) + ": point must lie inside " + to_string(spec));
}

Json make_doc(const std::string& command, Json value, Json witness, Json extra,
              const CliConfig& cfg, std::vector<std::string> warnings) {
    Json doc;
    doc["command"] = command;
    doc["value"] = std::move(value);
    doc["witness"] = std::move(witness);
    doc["extra"] = std::move(extra);
    doc["seed"] = cfg.seed;
    Json config;
    config["seed"] = cfg.seed;
    config["samples"] = cfg.samples;
    config["schedule"] = cfg.schedule;
    config["tolerance"] = cfg.tolerance;
    config["format"] = cfg.format;
    doc["config"] = std::move(config);
    doc["warnings"] = std::move(warnings);
    return doc;
}

void append_estimate_fields(Json& extra, const EstimateReport& report) {
    extra["samples_used"] = report.samples_used;
    extra["converged"] = report.converged_flag;
    extra["lower_bound_certified"] = report.lower_bound_certified;
}

void append_sample_dump(Json& extra, const DomainSpec& spec, const CliConfig& cfg) {
    if (!cfg.dump_samples) return;
    Json cloud = Json::array();
    for (const Point& z : sample_points(spec, cfg.samples, cfg.schedule.back(), cfg.seed))
        cloud.push_back(point_to_json(z));
    extra["samples"] = std::move(cloud);
}

void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object() && !j.empty()) {
        for (const auto& [key, value] : j.items())
            flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
    } else if (j.is_null()) {
        rows.emplace_back(prefix, "null");
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

void emit(const Json& doc, const CliConfig& cfg, std::ostream& out) {
    if (cfg.format == "table") {
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(doc, "", rows);
        std::size_t width = 0;
        for (const auto& [key, value] : rows) width = std::max(width, key.size());
        for (const auto& [key, value] : rows)
            out << std::left << std::setw(static_cast<int>(width) + 2) << key << value << "\n";
    } else {
        out << doc.dump(2) << "\n";
    }
}

const char* verdict_name(IsometryVerdict v) {
    switch (v) {
    case IsometryVerdict::ConsistentWithIsometry: return "consistent-with-isometry";
    case IsometryVerdict::FailsNecessaryCondition: return "fails-necessary-condition";
    case IsometryVerdict::AutomorphismExact: return "automorphism-exact";
    }
    return "";
}

const char* status_name(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
    }
    return "";
}

// Fractions rendered over the full group order, 0/L .. (L-1)/L, so the
// denominator shows the group at a glance.
Json fraction_list(std::size_t count) {
    Json out = Json::array();
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(std::to_string(k) + "/" + std::to_string(count));
    return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("blochlab");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bergman-metric Bloch analysis toolkit"};
    app.require_subcommand(1);
    CliConfig cfg;

    std::string spec_text, point_text, u_text, v_text, from_text, to_text;
    std::string map_path, symbol_path, function_text;
    std::string normalization = "metric";

    CLI::App* domain_cmd = app.add_subcommand("domain", "domain queries");
    domain_cmd->require_subcommand(1);
    CLI::App* info_cmd = domain_cmd->add_subcommand(
        "info", "dimension, rank, Bloch constant and inner radius of a domain");
    info_cmd->add_option("spec", spec_text, "domain spec, e.g. ball:2 or cartan1:2x3")->required();
    attach_config(info_cmd, &cfg, false);

    CLI::App* metric_cmd =
        app.add_subcommand("metric", "Bergman metric form at a point applied to tangent vectors");
    metric_cmd->add_option("--domain", spec_text)->required();
    metric_cmd->add_option("--point", point_text, "base point, inline [re,im;...] or a file")
        ->required();
    metric_cmd->add_option("--u", u_text, "tangent vector")->required();
    CLI::Option* v_opt = metric_cmd->add_option("--v", v_text, "second tangent vector");
    attach_config(metric_cmd, &cfg, false);

    CLI::App* seminorm_cmd =
        app.add_subcommand("seminorm", "Bloch semi-norm estimate of a scalar expression");
    seminorm_cmd->add_option("--domain", spec_text)->required();
    seminorm_cmd->add_option("--function", function_text, "expression in z1..zn")->required();
    attach_config(seminorm_cmd, &cfg, true);

    CLI::App* dilation_cmd =
        app.add_subcommand("dilation", "local Bergman dilation of a map at a point");
    dilation_cmd->add_option("--domain", spec_text)->required();
    dilation_cmd->add_option("--map", map_path, "map document file")->required();
    CLI::Option* point_opt =
        dilation_cmd->add_option("--point", point_text, "probe point; defaults to the origin");
    attach_config(dilation_cmd, &cfg, false);

    CLI::App* bergman_cmd =
        app.add_subcommand("bergman-constant", "supremum estimate of the local dilation");
    bergman_cmd->add_option("--domain", spec_text)->required();
    bergman_cmd->add_option("--map", map_path, "map document file")->required();
    attach_config(bergman_cmd, &cfg, true);

    CLI::App* distance_cmd = app.add_subcommand("distance", "Bergman distance between two points");
    distance_cmd->add_option("--domain", spec_text)->required();
    distance_cmd->add_option("--from", from_text)->required();
    distance_cmd->add_option("--to", to_text)->required();
    distance_cmd->add_option("--normalization", normalization, "metric or zhu")
        ->check(CLI::IsMember({"metric", "zhu"}));
    attach_config(distance_cmd, &cfg, false);

    CLI::App* bounds_cmd = app.add_subcommand(
        "norm-bounds", "lower and upper bounds for the composition operator norm");
    bounds_cmd->add_option("--domain", spec_text)->required();
    bounds_cmd->add_option("--map", map_path, "self-map document file")->required();
    attach_config(bounds_cmd, &cfg, true);

    CLI::App* isometry_cmd = app.add_subcommand(
        "isometry-check", "necessary-condition analysis of a disk self-map symbol");
    isometry_cmd->add_option("--domain", spec_text)->required();
    isometry_cmd->add_option("--map", map_path, "map document file")->required();
    attach_config(isometry_cmd, &cfg, true);

    CLI::App* neccond_cmd = app.add_subcommand(
        "neccond", "component-wise necessary conditions for an isometric symbol");
    neccond_cmd->add_option("--domain", spec_text)->required();
    neccond_cmd->add_option("--map", map_path, "map document file")->required();
    attach_config(neccond_cmd, &cfg, true);

    CLI::App* spectrum_cmd = app.add_subcommand(
        "spectrum", "spectrum of the composition operator of a rotation-type polydisk symbol");
    spectrum_cmd->add_option("--symbol", symbol_path, "symbol document file")->required();
    attach_config(spectrum_cmd, &cfg, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        finalize_config(cfg);
        const EstimateConfig ec = to_estimate_config(cfg);
        Json doc;

        if (info_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            Json extra;
            extra["spec"] = to_string(spec);
            extra["dimension"] = spec.dimension();
            extra["rank"] = rank(spec);
            extra["bloch_constant"] = bloch_constant(spec);
            extra["inner_radius"] = inner_radius(spec);
            doc = make_doc("domain info", nullptr, nullptr, std::move(extra), cfg, {});
        } else if (metric_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            const Point z = read_vector_arg(point_text);
            require_inside(spec, z, "metric point");
            const CVec u = read_vector_arg(u_text);
            if (static_cast<int>(u.size()) != spec.dimension())
                throw ValidationError("metric tangent u: expected dimension " +
                                      std::to_string(spec.dimension()));
            const HermitianForm form = metric_matrix(spec, z);
            Json extra;
            const double quad_u = form.quad(u);
            extra["quad_u"] = quad_u;
            Json value = quad_u;
            if (v_opt->count() > 0) {
                const CVec v = read_vector_arg(v_text);
                if (static_cast<int>(v.size()) != spec.dimension())
                    throw ValidationError("metric tangent v: expected dimension " +
                                          std::to_string(spec.dimension()));
                const cx mixed = form.form(u, v);
                extra["quad_v"] = form.quad(v);
                extra["form"] = Json::array({mixed.real(), mixed.imag()});
                value = nullptr;
            }
            doc = make_doc("metric", std::move(value), point_to_json(z), std::move(extra), cfg, {});
        } else if (seminorm_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            const HoloMap f = HoloMap::expr_map(spec, std::vector<std::string>{function_text});
            const EstimateReport report = bloch_seminorm(f, spec, ec);
            Json extra;
            append_estimate_fields(extra, report);
            append_sample_dump(extra, spec, cfg);
            doc = make_doc("seminorm", report.value, point_to_json(report.witness),
                           std::move(extra), cfg, report.warnings);
        } else if (dilation_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            const HoloMap map = map_from_json(load_json(map_path), spec);
            const Point z = point_opt->count() > 0 ? read_vector_arg(point_text)
                                                   : Point(spec.dimension(), cx(0.0));
            require_inside(spec, z, "dilation point");
            const double value = local_dilation(map, spec, z);
            std::vector<std::string> warnings;
            const bool self_map = map.codomain() && *map.codomain() == spec;
            if (self_map && value > std::sqrt(static_cast<double>(rank(spec))) + cfg.tolerance)
                warnings.push_back(
                    "local dilation exceeds the rank-based self-map bound at the probed point");
            doc = make_doc("dilation", value, point_to_json(z), Json::object(), cfg,
                           std::move(warnings));
        } else if (bergman_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            const HoloMap map = map_from_json(load_json(map_path), spec);
            const EstimateReport report = bergman_constant(map, spec, ec);
            Json extra;
            append_estimate_fields(extra, report);
            append_sample_dump(extra, spec, cfg);
            doc = make_doc("bergman-constant", report.value, point_to_json(report.witness),
                           std::move(extra), cfg, report.warnings);
        } else if (distance_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            const Point a = read_vector_arg(from_text);
            const Point b = read_vector_arg(to_text);
            require_inside(spec, a, "distance from");
            require_inside(spec, b, "distance to");
            double value = 0.0;
            if (normalization == "zhu") {
                if (spec.kind() != DomainSpec::Kind::Ball && spec.kind() != DomainSpec::Kind::Disk)
                    throw UnsupportedError(
                        "distance: zhu normalization is defined on the disk and balls only");
                value = zhu_distance_ball(a, b);
            } else {
                value = bergman_distance(spec, a, b);
            }
            Json extra;
            extra["normalization"] = normalization;
            doc = make_doc("distance", value, nullptr, std::move(extra), cfg, {});
        } else if (bounds_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            const HoloMap map = map_from_json(load_json(map_path), spec);
            const NormBounds bounds = composition_norm_bounds(map, spec, ec);
            Json extra;
            extra["lower"] = bounds.lower;
            extra["upper"] = bounds.upper;
            extra["rho_at_origin"] = bounds.rho_at_origin;
            extra["bergman_hat"] = bounds.bergman_hat;
            append_sample_dump(extra, spec, cfg);
            doc = make_doc("norm-bounds", nullptr, nullptr, std::move(extra), cfg, {});
        } else if (isometry_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            if (spec != DomainSpec::disk())
                throw UnsupportedError("isometry-check: provided for the unit disk only");
            const HoloMap map = map_from_json(load_json(map_path), spec);
            const IsometryReport report = check_disk_isometry(map, ec);
            Json extra;
            extra["verdict"] = verdict_name(report.verdict);
            extra["verdict_reason"] = report.verdict_reason;
            extra["fixes_origin"] = report.fixes_origin;
            extra["beta_hat"] = report.beta_hat;
            extra["bergman_hat"] = report.bergman_hat;
            extra["condition_e"] =
                report.condition_e_value ? Json(*report.condition_e_value) : Json(nullptr);
            extra["thinness_profile"] = report.thinness_profile;
            extra["condition_g_residuals"] = report.condition_g_residuals;
            extra["truncation_level"] = report.truncation_level;
            append_sample_dump(extra, spec, cfg);
            doc = make_doc("isometry-check", report.beta_hat, nullptr, std::move(extra), cfg, {});
        } else if (neccond_cmd->parsed()) {
            const DomainSpec spec = parse_domain(spec_text);
            const HoloMap map = map_from_json(load_json(map_path), spec);
            const NecessaryConditionsReport report = check_necessary_conditions(map, spec, ec);
            Json checks = Json::array();
            for (const ConditionCheck& check : report.checks) {
                Json row;
                row["name"] = check.name;
                row["status"] = status_name(check.status);
                row["value"] = check.value;
                row["target"] = check.target;
                checks.push_back(std::move(row));
            }
            Json extra;
            extra["all_pass"] = report.all_pass;
            extra["checks"] = std::move(checks);
            append_sample_dump(extra, spec, cfg);
            doc = make_doc("neccond", nullptr, nullptr, std::move(extra), cfg, {});
        } else if (spectrum_cmd->parsed()) {
            const PolydiskSymbol sym = symbol_from_json(load_json(symbol_path));
            const SpectrumResult result = spectrum(sym);
            Json extra;
            Json value = nullptr;
            switch (result.kind) {
            case SpectrumResult::Kind::ClosedUnitDisk:
                extra["kind"] = "closed-unit-disk";
                extra["group_order"] = nullptr;
                break;
            case SpectrumResult::Kind::UnitCircle:
                extra["kind"] = "unit-circle";
                extra["group_order"] = nullptr;
                break;
            case SpectrumResult::Kind::FiniteCyclicGroup:
                extra["kind"] = "finite-cyclic-group";
                extra["group_order"] = result.group_order;
                value = result.group_order;
                break;
            }
            extra["elements"] = fraction_list(result.elements.size());
            extra["guaranteed_eigenvalues"] = fraction_list(result.guaranteed_eigenvalues.size());
            doc = make_doc("spectrum", std::move(value), nullptr, std::move(extra), cfg, {});
        }

        emit(doc, cfg, out);
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const SingularityError& e) {
        err << "numerical singularity: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace blochlab
