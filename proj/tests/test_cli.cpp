#include "blochlab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blochlab/bloch_analysis.hpp"
#include "blochlab/errors.hpp"
#include "blochlab/jsonio.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace blochlab;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

Json parsed(const CliResult& r) {
    REQUIRE(r.code == 0);
    return Json::parse(r.out);
}

std::string write_doc(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "blochlab_cli_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

} // namespace

TEST_CASE("inline vector grammar") {
    const Point z = parse_inline_vector(" [ 0.1, -0.25; 3e-2, 0.4 ] ");
    REQUIRE(z.size() == 2);
    CHECK(z[0] == cx(0.1, -0.25));
    CHECK(z[1] == cx(0.03, 0.4));
    CHECK(parse_inline_vector("[]").empty());
    CHECK_THROWS_AS((void)parse_inline_vector("0.1,0.2"), ValidationError);
    CHECK_THROWS_AS((void)parse_inline_vector("[0.1;0.2]"), ValidationError);
    CHECK_THROWS_AS((void)parse_inline_vector("[oops,1]"), ValidationError);
    CHECK_THROWS_AS((void)parse_inline_vector("[1,2,3]"), ValidationError);
}

TEST_CASE("rotation and complex literals") {
    CHECK(rotation_from_json(Json("3/4")).p() == 3);
    CHECK(rotation_from_json(Json("3/4")).q() == 4);
    CHECK(rotation_from_json(Json("-1/3")).p() == 2);
    const Json irr = {{"irrational", 0.5}, {"label", "half"}};
    CHECK(!rotation_from_json(irr).is_rational());
    CHECK(rotation_from_json(irr).label() == "half");
    CHECK_THROWS_AS((void)rotation_from_json(Json("1/0")), ValidationError);
    CHECK_THROWS_AS((void)rotation_from_json(Json("x/y")), ValidationError);
    CHECK_THROWS_AS((void)rotation_from_json(Json(0.25)), ValidationError);
    CHECK_THROWS_AS((void)rotation_from_json(Json("1/4/2")), ValidationError);

    CHECK(complex_from_json(Json(0.5)) == cx(0.5, 0.0));
    const Json pair = {{"re", -0.1}, {"im", 0.7}};
    CHECK(complex_from_json(pair) == cx(-0.1, 0.7));
    CHECK_THROWS_AS((void)complex_from_json(Json("0.5")), ValidationError);
}

TEST_CASE("map documents reproduce the factory maps") {
    const DomainSpec disk = DomainSpec::disk();
    const Point z{cx(0.31, -0.22)};

    const Json mobius = Json::parse(R"({"kind":"mobius_disk","a":{"re":0.4,"im":0.1},"rotation":"1/4"})");
    const HoloMap from_doc = map_from_json(mobius, disk);
    const HoloMap direct = HoloMap::mobius_disk(cx(0.4, 0.1), std::acos(-1.0) / 2.0);
    CHECK(std::abs(from_doc.evaluate(z)[0] - direct.evaluate(z)[0]) < 1e-15);

    const Json blaschke = Json::parse(R"({"kind":"blaschke_product","zeros":[{"re":0.5,"im":0},0.2],"front":"1/2"})");
    const HoloMap b_doc = map_from_json(blaschke, disk);
    const HoloMap b_direct = HoloMap::blaschke_product({cx(0.5), cx(0.2)}, cx(-1.0));
    CHECK(std::abs(b_doc.evaluate(z)[0] - b_direct.evaluate(z)[0]) < 1e-15);

    const Json comp = Json::parse(R"({"kind":"compose",
        "outer":{"kind":"blaschke_product","zeros":[0.5]},
        "inner":{"kind":"mobius_disk","a":{"re":0.3,"im":0}}})");
    const HoloMap c_doc = map_from_json(comp, disk);
    const HoloMap c_direct =
        compose(HoloMap::blaschke_product({cx(0.5)}), HoloMap::mobius_disk(cx(0.3), 0.0));
    CHECK(std::abs(c_doc.evaluate(z)[0] - c_direct.evaluate(z)[0]) < 1e-15);

    const DomainSpec p2 = DomainSpec::polydisk(2);
    const Point w{cx(0.2, 0.1), cx(-0.3, 0.25)};
    const Json pauto = Json::parse(R"({"kind":"polydisk_automorphism",
        "components":[{"kind":"mobius_disk","a":{"re":0.2,"im":0}},{"kind":"mobius_disk","rotation":"1/2"}],
        "tau":[2,1]})");
    const HoloMap pa_doc = map_from_json(pauto, p2);
    const HoloMap pa_direct = HoloMap::polydisk_automorphism(
        {HoloMap::mobius_disk(cx(0.2), 0.0), HoloMap::mobius_disk(cx(0.0), std::acos(-1.0))},
        {1, 0});
    const Point got = pa_doc.evaluate(w), want = pa_direct.evaluate(w);
    CHECK(std::abs(got[0] - want[0]) < 1e-15);
    CHECK(std::abs(got[1] - want[1]) < 1e-15);

    const Json prod = Json::parse(R"({"kind":"product",
        "factors":[{"kind":"identity"},{"kind":"mobius_disk","a":{"re":0.1,"im":0}}]})");
    const HoloMap prod_doc = map_from_json(prod, p2);
    CHECK(std::abs(prod_doc.evaluate(w)[0] - w[0]) < 1e-15);

    const Json e51 = Json::parse(R"({"kind":"example51",
        "automorphism":{"kind":"mobius_disk","rotation":"1/2"},
        "disk_map":{"kind":"blaschke_product","zeros":[0.5]}})");
    CHECK(map_from_json(e51, p2).evaluate(w).size() == 2);

    CHECK_THROWS_AS((void)map_from_json(blaschke, DomainSpec::ball(2)), ValidationError);
    CHECK_THROWS_AS((void)map_from_json(Json::parse(R"({"kind":"wat"})"), disk), ValidationError);
    CHECK_THROWS_AS((void)map_from_json(Json::parse(R"({"nokind":1})"), disk), ValidationError);
}

TEST_CASE("symbol documents") {
    const PolydiskSymbol sym = symbol_from_json(Json::parse(
        R"({"lambdas":["1/3","0/1",{"irrational":0.7071}],"tau":[2,1,3],"class":"automorphism"})"));
    REQUIRE(sym.lambdas.size() == 3);
    CHECK(sym.lambdas[0].q() == 3);
    CHECK(!sym.lambdas[2].is_rational());
    CHECK(sym.tau == std::vector<int>{2, 1, 3});
    CHECK(sym.class_hint == SymbolClass::Automorphism);

    const PolydiskSymbol defaults = symbol_from_json(Json::parse(R"({"lambdas":["1/2","1/2"]})"));
    CHECK(defaults.tau == std::vector<int>{1, 2});
    CHECK(defaults.class_hint == SymbolClass::Unknown);
    CHECK_THROWS_AS((void)symbol_from_json(Json::parse(R"({"class":"sideways"})")),
                    ValidationError);
}

TEST_CASE("cli: domain info") {
    const Json doc = parsed(run({"domain", "info", "cartan3:5"}));
    CHECK(doc["command"] == "domain info");
    CHECK(doc["value"].is_null());
    CHECK(doc["witness"].is_null());
    CHECK(doc["extra"]["spec"] == "cartan3:5");
    CHECK(doc["extra"]["dimension"] == 10);
    CHECK(doc["extra"]["rank"] == 2);
    CHECK(doc["extra"]["bloch_constant"] == 0.5);
    CHECK(doc["extra"]["inner_radius"] == 2.0);
    CHECK(doc["seed"] == 42);
    CHECK(doc["config"]["samples"] == 20000);
    CHECK(doc["config"]["schedule"].size() == 4);
    CHECK(doc["warnings"].empty());

    const Json ball = parsed(run({"domain", "info", "ball:3"}));
    CHECK(testu::approx_eq(ball["extra"]["bloch_constant"].get<double>(), std::sqrt(0.5), 1e-15));
}

TEST_CASE("cli: seminorm matches the closed form on the disk") {
    const Json doc = parsed(run({"seminorm", "--domain", "disk", "--function", "z1^2",
                                 "--samples", "2000"}));
    const double expected = 4.0 / (3.0 * std::sqrt(3.0));
    CHECK(testu::approx_eq(doc["value"].get<double>(), expected, 1e-6));
    REQUIRE(doc["witness"].is_array());
    REQUIRE(doc["witness"].size() == 1);
    const double r = std::hypot(doc["witness"][0][0].get<double>(),
                                doc["witness"][0][1].get<double>());
    CHECK(testu::approx_eq(r, 1.0 / std::sqrt(3.0), 1e-3));
    CHECK(doc["extra"]["lower_bound_certified"] == true);
    CHECK(doc["config"]["samples"] == 2000);
}

TEST_CASE("cli: byte-identical reruns") {
    const std::vector<std::string> argv{"seminorm", "--domain", "polydisk:2", "--function",
                                        "z1*z2",    "--samples", "300"};
    const CliResult first = run(argv), second = run(argv);
    CHECK(first.code == 0);
    CHECK(second.code == 0);
    CHECK(first.out == second.out);
    CHECK(!first.out.empty());
}

TEST_CASE("cli: metric quadratic and sesquilinear values") {
    const Json doc = parsed(run({"metric", "--domain", "ball:2", "--point", "[0.1,0;0.2,0]",
                                 "--u", "[1,0;0,0]"}));
    const HermitianForm form = metric_matrix(DomainSpec::ball(2), {cx(0.1), cx(0.2)});
    const double quad = form.quad({cx(1.0), cx(0.0)});
    CHECK(testu::approx_eq(doc["value"].get<double>(), quad, 1e-14));
    CHECK(testu::approx_eq(doc["extra"]["quad_u"].get<double>(), quad, 1e-14));

    const Json mixed = parsed(run({"metric", "--domain", "ball:2", "--point", "[0.1,0;0.2,0]",
                                   "--u", "[1,0;0,0]", "--v", "[0,0;1,0]"}));
    CHECK(mixed["value"].is_null());
    const cx want = form.form({cx(1.0), cx(0.0)}, {cx(0.0), cx(1.0)});
    CHECK(testu::approx_eq(mixed["extra"]["form"][0].get<double>(), want.real(), 1e-14));
    CHECK(testu::approx_eq(mixed["extra"]["form"][1].get<double>(), want.imag(), 1e-14));
}

TEST_CASE("cli: dilation document flow") {
    const std::string diag = write_doc("diag.json", R"({"kind":"diagonal_embedding","n":2})");
    const Json doc = parsed(run({"dilation", "--domain", "disk", "--map", diag}));
    CHECK(testu::approx_eq(doc["value"].get<double>(), std::sqrt(2.0), 1e-12));
    CHECK(doc["witness"].size() == 1);
    CHECK(doc["warnings"].empty());

    const Json at = parsed(run({"dilation", "--domain", "disk", "--map", diag,
                                "--point", "[0.3,0.1]"}));
    CHECK(testu::approx_eq(at["value"].get<double>(), std::sqrt(2.0), 1e-12));
}

TEST_CASE("cli: distance normalizations") {
    const Json metric = parsed(run({"distance", "--domain", "disk", "--from", "[0,0]",
                                    "--to", "[0.5,0]"}));
    CHECK(testu::approx_eq(metric["value"].get<double>(), 0.5 * std::log(3.0), 1e-12));

    const Json zhu = parsed(run({"distance", "--domain", "ball:2", "--from", "[0,0;0,0]",
                                 "--to", "[0.9,0;0,0]", "--normalization", "zhu"}));
    CHECK(testu::approx_eq(zhu["value"].get<double>(), 0.5 * std::log(19.0), 1e-12));
    CHECK(zhu["extra"]["normalization"] == "zhu");

    const CliResult unsupported = run({"distance", "--domain", "cartan2:2", "--from",
                                       "[0,0;0,0;0,0]", "--to", "[0.1,0;0,0;0,0]"});
    CHECK(unsupported.code == 3);
}

TEST_CASE("cli: norm bounds for a constant symbol") {
    const std::string path = write_doc(
        "const.json", R"({"kind":"constant","value":[{"re":0.9,"im":0},{"re":0,"im":0}]})");
    const Json doc = parsed(run({"norm-bounds", "--domain", "ball:2", "--map", path,
                                 "--samples", "500"}));
    const double half_log19 = 0.5 * std::log(19.0);
    CHECK(testu::approx_eq(doc["extra"]["lower"].get<double>(), half_log19, 1e-9));
    CHECK(doc["extra"]["upper"].get<double>() >= doc["extra"]["lower"].get<double>() - 1e-12);
    CHECK(testu::approx_eq(doc["extra"]["bergman_hat"].get<double>(), 0.0, 1e-12));
}

TEST_CASE("cli: isometry check and necessary conditions") {
    const std::string rot = write_doc(
        "rot.json", R"({"kind":"mobius_disk","a":{"re":0,"im":0},"rotation":"1/4"})");
    const Json iso = parsed(run({"isometry-check", "--domain", "disk", "--map", rot,
                                 "--samples", "800"}));
    CHECK(iso["extra"]["verdict"] == "automorphism-exact");
    CHECK(testu::approx_eq(iso["value"].get<double>(), 1.0, 1e-9));
    CHECK(iso["extra"]["fixes_origin"] == true);
    CHECK(iso["extra"]["condition_e"].is_null());

    const CliResult wrong_domain = run({"isometry-check", "--domain", "ball:2", "--map", rot});
    CHECK(wrong_domain.code == 3);

    const std::string half = write_doc("half.json",
                                       R"({"kind":"expr","components":["z1/2","z2"]})");
    const Json nec = parsed(run({"neccond", "--domain", "polydisk:2", "--map", half,
                                 "--samples", "800"}));
    CHECK(nec["extra"]["all_pass"] == false);
    bool saw_inconclusive = false;
    for (const Json& check : nec["extra"]["checks"])
        if (check["name"] == "seminorm[1]") {
            CHECK(check["status"] == "inconclusive");
            saw_inconclusive = true;
        }
    CHECK(saw_inconclusive);
}

TEST_CASE("cli: spectrum documents") {
    const std::string third = write_doc(
        "rot_third.json", R"({"lambdas":["1/3"],"tau":[1],"class":"automorphism"})");
    const Json doc = parsed(run({"spectrum", "--symbol", third}));
    CHECK(doc["value"] == 3);
    CHECK(doc["extra"]["kind"] == "finite-cyclic-group");
    CHECK(doc["extra"]["group_order"] == 3);
    CHECK(doc["extra"]["elements"] == Json::array({"0/3", "1/3", "2/3"}));
    CHECK(doc["extra"]["guaranteed_eigenvalues"] == Json::array({"0/3", "1/3", "2/3"}));

    const std::string mixed = write_doc(
        "swap.json", R"({"lambdas":["1/3","0/1"],"tau":[2,1],"class":"automorphism"})");
    const Json swap = parsed(run({"spectrum", "--symbol", mixed}));
    CHECK(swap["extra"]["group_order"] == 6);
    CHECK(swap["extra"]["elements"].size() == 6);
    CHECK(swap["extra"]["guaranteed_eigenvalues"].size() == 3);

    const std::string irr = write_doc(
        "irr.json", R"({"lambdas":[{"irrational":0.7071}],"class":"automorphism"})");
    const Json circle = parsed(run({"spectrum", "--symbol", irr}));
    CHECK(circle["value"].is_null());
    CHECK(circle["extra"]["kind"] == "unit-circle");
    CHECK(circle["extra"]["elements"].empty());

    const std::string onto = write_doc("onto.json", R"({"class":"non-auto-onto"})");
    CHECK(parsed(run({"spectrum", "--symbol", onto}))["extra"]["kind"] == "closed-unit-disk");

    const std::string unknown = write_doc("unknown.json", R"({"lambdas":["1/3"]})");
    CHECK(run({"spectrum", "--symbol", unknown}).code == 3);
}

TEST_CASE("cli: exit codes name the failing layer") {
    CHECK(run({}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"seminorm", "--domain", "disk", "--function", "z1", "--samples", "0"}).code == 2);
    CHECK(run({"seminorm", "--domain", "disk", "--function", "z1",
               "--schedule", "0.9,0.5"}).code == 2);

    const CliResult bad_domain = run({"domain", "info", "wat:3"});
    CHECK(bad_domain.code == 3);
    CHECK(!bad_domain.err.empty());
    CHECK(run({"metric", "--domain", "disk", "--point", "[1.5,0]", "--u", "[1,0]"}).code == 3);
    CHECK(run({"metric", "--domain", "disk", "--point", "[oops]", "--u", "[1,0]"}).code == 3);
    CHECK(run({"dilation", "--domain", "disk", "--map", "/nonexistent/map.json"}).code == 3);

    const std::string pole = write_doc("pole.json", R"({"kind":"expr","components":["1/z1"]})");
    CHECK(run({"dilation", "--domain", "disk", "--map", pole, "--point", "[0,0]"}).code == 4);

    const CliResult help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("seminorm") != std::string::npos);
}

TEST_CASE("cli: table format and sample dumps") {
    const CliResult table = run({"domain", "info", "cartan3:5", "--format", "table"});
    CHECK(table.code == 0);
    CHECK(table.out.find("bloch_constant") != std::string::npos);
    CHECK(table.out.find("0.5") != std::string::npos);
    CHECK(table.out.find("command") == 0);
    CHECK(table.out.find('{') == std::string::npos);

    const Json dump = parsed(run({"seminorm", "--domain", "disk", "--function", "z1",
                                  "--samples", "60", "--dump-samples"}));
    REQUIRE(dump["extra"].contains("samples"));
    CHECK(dump["extra"]["samples"].size() == 60);
    for (const Json& pt : dump["extra"]["samples"]) {
        REQUIRE(pt.size() == 1);
        CHECK(std::hypot(pt[0][0].get<double>(), pt[0][1].get<double>()) < 1.0);
    }
}
