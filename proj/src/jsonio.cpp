#include "blochlab/jsonio.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

#include "blochlab/errors.hpp"

namespace blochlab {
namespace {

double number_from_json(const Json& j, const char* what) {
    if (!j.is_number()) throw ValidationError(std::string(what) + ": expected a number");
    return j.get<double>();
}

long long integer_field(const std::string& text) {
    long long value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ValidationError("rotation number: malformed integer \"" + text + "\"");
    return value;
}

const Json& required_field(const Json& doc, const char* key, const char* kind) {
    if (!doc.contains(key))
        throw ValidationError(std::string("map document: kind \"") + kind +
                              "\" requires field \"" + key + "\"");
    return doc.at(key);
}

// Factor domains seen by sub-documents of product-structured maps.
std::vector<DomainSpec> product_factors(const DomainSpec& spec) {
    if (spec.kind() == DomainSpec::Kind::Product) return spec.factors();
    if (spec.kind() == DomainSpec::Kind::Polydisk)
        return std::vector<DomainSpec>(static_cast<std::size_t>(spec.n()), DomainSpec::disk());
    throw ValidationError("map document: product-structured map needs a product or polydisk "
                          "domain, got " + to_string(spec));
}

std::vector<int> int_list_from_json(const Json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
    std::vector<int> out;
    for (const Json& e : j) {
        if (!e.is_number_integer()) throw ValidationError(std::string(what) + ": expected integers");
        out.push_back(e.get<int>());
    }
    return out;
}

} // namespace

cx complex_from_json(const Json& j) {
    if (j.is_number()) return cx(j.get<double>(), 0.0);
    if (j.is_object() && j.contains("re") && j.contains("im"))
        return cx(number_from_json(j.at("re"), "complex re"),
                  number_from_json(j.at("im"), "complex im"));
    throw ValidationError("complex literal must be a number or {\"re\":..,\"im\":..}");
}

Point point_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("vector literal must be an array");
    Point z;
    z.reserve(j.size());
    for (const Json& e : j) z.push_back(complex_from_json(e));
    return z;
}

CMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix literal must be an array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.at(0).size());
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = j.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ValidationError("matrix literal rows must have equal length");
        for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(row.at(static_cast<std::size_t>(k)));
    }
    return m;
}

RotationNumber rotation_from_json(const Json& j) {
    if (j.is_string()) {
        const std::string text = j.get<std::string>();
        const std::size_t slash = text.find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == text.size())
            throw ValidationError("rotation number: expected \"p/q\", got \"" + text + "\"");
        return RotationNumber::rational(integer_field(text.substr(0, slash)),
                                        integer_field(text.substr(slash + 1)));
    }
    if (j.is_object() && j.contains("irrational"))
        return RotationNumber::irrational(number_from_json(j.at("irrational"), "irrational turn"),
                                          j.value("label", std::string{}));
    throw ValidationError("rotation number must be \"p/q\" or {\"irrational\": t}");
}

HoloMap map_from_json(const Json& doc, const DomainSpec& domain) {
    if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string())
        throw ValidationError("map document: missing string field \"kind\"");
    const std::string kind = doc.at("kind").get<std::string>();

    auto finish = [&](HoloMap built) {
        if (built.domain() != domain)
            throw ValidationError("map document: map is defined on " + to_string(built.domain()) +
                                  " but the requested domain is " + to_string(domain));
        return built;
    };

    if (kind == "identity") return HoloMap::identity(domain);
    if (kind == "constant")
        return HoloMap::constant(domain, point_from_json(required_field(doc, "value", "constant")));
    if (kind == "expr") {
        const Json& comps = required_field(doc, "components", "expr");
        if (!comps.is_array() || comps.empty())
            throw ValidationError("map document: \"components\" must be a nonempty array");
        std::vector<std::string> texts;
        for (const Json& c : comps) {
            if (!c.is_string()) throw ValidationError("map document: components must be strings");
            texts.push_back(c.get<std::string>());
        }
        return HoloMap::expr_map(domain, texts);
    }
    if (kind == "mobius_disk") {
        const cx a = doc.contains("a") ? complex_from_json(doc.at("a")) : cx(0.0);
        double theta = 0.0;
        if (doc.contains("rotation"))
            theta = 2.0 * std::numbers::pi * rotation_from_json(doc.at("rotation")).turn();
        else if (doc.contains("theta"))
            theta = number_from_json(doc.at("theta"), "theta");
        return finish(HoloMap::mobius_disk(a, theta));
    }
    if (kind == "blaschke_product") {
        const CVec zeros = point_from_json(required_field(doc, "zeros", "blaschke_product"));
        const cx front = doc.contains("front")
                             ? rotation_from_json(doc.at("front")).unimodular()
                             : cx(1.0);
        return finish(HoloMap::blaschke_product(zeros, front));
    }
    if (kind == "ball_automorphism")
        return finish(HoloMap::ball_automorphism(
            matrix_from_json(required_field(doc, "unitary", "ball_automorphism")),
            point_from_json(required_field(doc, "center", "ball_automorphism"))));
    if (kind == "polydisk_automorphism") {
        const Json& comps = required_field(doc, "components", "polydisk_automorphism");
        if (!comps.is_array()) throw ValidationError("map document: \"components\" must be an array");
        std::vector<HoloMap> mobius;
        for (const Json& c : comps) mobius.push_back(map_from_json(c, DomainSpec::disk()));
        std::vector<int> tau = int_list_from_json(required_field(doc, "tau", "polydisk_automorphism"),
                                                  "map document tau");
        for (int& image : tau) --image;  // documents are 1-based
        return finish(HoloMap::polydisk_automorphism(std::move(mobius), std::move(tau)));
    }
    if (kind == "projection")
        return HoloMap::projection(domain, required_field(doc, "j", "projection").get<int>());
    if (kind == "modified_projection") {
        const int r = required_field(doc, "r", "modified_projection").get<int>();
        const int s = required_field(doc, "s", "modified_projection").get<int>();
        const int sign = doc.value("sign", 1);
        return HoloMap::modified_projection(domain, r, s, sign);
    }
    if (kind == "diagonal_embedding")
        return finish(HoloMap::diagonal_embedding(
            required_field(doc, "n", "diagonal_embedding").get<int>()));
    if (kind == "extremal_log_map")
        return finish(HoloMap::extremal_log_map(
            point_from_json(required_field(doc, "center", "extremal_log_map"))));
    if (kind == "example51") {
        const std::vector<DomainSpec> factors = product_factors(domain);
        if (factors.size() != 2 || factors.back() != DomainSpec::disk())
            throw ValidationError("map document: example51 needs a domain of the form "
                                  "product(D, disk)");
        // Factor domains are already matched; the factory spells the domain
        // product(D, disk), which on a polydisk request is the same set.
        return HoloMap::example51(
            map_from_json(required_field(doc, "automorphism", "example51"), factors.front()),
            map_from_json(required_field(doc, "disk_map", "example51"), DomainSpec::disk()));
    }
    if (kind == "product") {
        const Json& facs = required_field(doc, "factors", "product");
        const std::vector<DomainSpec> factors = product_factors(domain);
        if (!facs.is_array() || facs.size() != factors.size())
            throw ValidationError("map document: product needs one factor map per factor domain");
        std::vector<HoloMap> built;
        for (std::size_t i = 0; i < factors.size(); ++i)
            built.push_back(map_from_json(facs.at(i), factors[i]));
        return HoloMap::product_map(std::move(built));
    }
    if (kind == "compose") {
        HoloMap inner = map_from_json(required_field(doc, "inner", "compose"), domain);
        if (!inner.codomain())
            throw ValidationError("map document: compose needs an inner map with a declared "
                                  "codomain");
        HoloMap outer = map_from_json(required_field(doc, "outer", "compose"), *inner.codomain());
        return compose(std::move(outer), std::move(inner));
    }
    throw ValidationError("map document: unknown kind \"" + kind + "\"");
}

PolydiskSymbol symbol_from_json(const Json& doc) {
    if (!doc.is_object()) throw ValidationError("symbol document must be an object");
    PolydiskSymbol sym;
    if (doc.contains("lambdas")) {
        const Json& ls = doc.at("lambdas");
        if (!ls.is_array()) throw ValidationError("symbol document: \"lambdas\" must be an array");
        for (const Json& l : ls) sym.lambdas.push_back(rotation_from_json(l));
    }
    if (doc.contains("tau"))
        sym.tau = int_list_from_json(doc.at("tau"), "symbol document tau");
    else
        for (std::size_t k = 1; k <= sym.lambdas.size(); ++k) sym.tau.push_back(static_cast<int>(k));

    const std::string cls = doc.value("class", std::string("unknown"));
    if (cls == "automorphism") sym.class_hint = SymbolClass::Automorphism;
    else if (cls == "non-auto-onto") sym.class_hint = SymbolClass::NonAutoOnto;
    else if (cls == "unknown") sym.class_hint = SymbolClass::Unknown;
    else
        throw ValidationError("symbol document: class must be automorphism, non-auto-onto or "
                              "unknown, got \"" + cls + "\"");
    return sym;
}

Point parse_inline_vector(const std::string& text) {
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    if (compact.size() < 2 || compact.front() != '[' || compact.back() != ']')
        throw ValidationError("vector: expected [re,im;re,im;...], got \"" + text + "\"");
    const std::string body = compact.substr(1, compact.size() - 2);
    Point z;
    if (body.empty()) return z;

    std::size_t at = 0;
    while (true) {
        const std::size_t semi = body.find(';', at);
        const std::string entry = body.substr(at, semi == std::string::npos ? semi : semi - at);
        const std::size_t comma = entry.find(',');
        if (comma == std::string::npos || entry.find(',', comma + 1) != std::string::npos)
            throw ValidationError("vector: each component needs exactly one comma, got \"" +
                                  entry + "\"");
        try {
            std::size_t used = 0;
            const double re = std::stod(entry.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument(entry);
            const std::string im_text = entry.substr(comma + 1);
            const double im = std::stod(im_text, &used);
            if (used != im_text.size()) throw std::invalid_argument(entry);
            z.emplace_back(re, im);
        } catch (const std::logic_error&) {
            throw ValidationError("vector: malformed component \"" + entry + "\"");
        }
        if (semi == std::string::npos) break;
        at = semi + 1;
    }
    return z;
}

Json point_to_json(const Point& z) {
    Json out = Json::array();
    for (const cx& c : z) out.push_back(Json::array({c.real(), c.imag()}));
    return out;
}

} // namespace blochlab
