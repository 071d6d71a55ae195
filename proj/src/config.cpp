#include "vbar/config.hpp"

#include "vbar/errors.hpp"
#include "vbar/symmetry.hpp"

#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

namespace vbar {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError("config: " + where + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) fail(where, "unknown key \"" + key + "\"");
    }
}

const json& expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    return j;
}

double number_at(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key \"") + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& where, const char* key,
                 double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

long long integer_at(const json& obj, const std::string& where,
                     const char* key, long long fallback, bool required) {
    if (!obj.contains(key)) {
        if (required) fail(where, std::string("missing key \"") + key + "\"");
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail(where + "." + key, "expected an integer");
    return v.get<long long>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) fail(where, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void parse_parameters(const json& params, PotentialSpec& spec) {
    const std::string where = "parameters";
    expect_object(params, where);
    switch (spec.family) {
    case Family::anisotropic_harmonic: {
        reject_unknown_keys(params, where, {"omegas"});
        if (!params.contains("omegas")) fail(where, "missing key \"omegas\"");
        spec.omegas = number_list(params.at("omegas"), where + ".omegas");
        break;
    }
    case Family::gaussian_well_sum: {
        reject_unknown_keys(params, where, {"terms"});
        if (!params.contains("terms")) fail(where, "missing key \"terms\"");
        const json& terms = params.at("terms");
        if (!terms.is_array()) fail(where + ".terms", "expected an array");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tw = where + ".terms[" + std::to_string(i) + "]";
            const json& t = expect_object(terms.at(i), tw);
            reject_unknown_keys(t, tw, {"depth", "widths", "center"});
            GaussianTerm term;
            term.depth = number_at(t, tw, "depth");
            if (!t.contains("widths")) fail(tw, "missing key \"widths\"");
            term.widths = number_list(t.at("widths"), tw + ".widths");
            if (!t.contains("center")) fail(tw, "missing key \"center\"");
            term.center = number_list(t.at("center"), tw + ".center");
            spec.gaussians.push_back(std::move(term));
        }
        break;
    }
    case Family::polynomial_well: {
        reject_unknown_keys(params, where, {"monomials"});
        if (!params.contains("monomials"))
            fail(where, "missing key \"monomials\"");
        const json& monos = params.at("monomials");
        if (!monos.is_array()) fail(where + ".monomials", "expected an array");
        for (std::size_t i = 0; i < monos.size(); ++i) {
            const std::string tw =
                where + ".monomials[" + std::to_string(i) + "]";
            const json& t = expect_object(monos.at(i), tw);
            reject_unknown_keys(t, tw, {"coefficient", "powers"});
            PolynomialTerm term;
            term.coefficient = number_at(t, tw, "coefficient");
            if (!t.contains("powers")) fail(tw, "missing key \"powers\"");
            const json& pw = t.at("powers");
            if (!pw.is_array()) fail(tw + ".powers", "expected an array");
            for (const auto& e : pw) {
                if (!e.is_number_integer())
                    fail(tw + ".powers", "expected integer exponents");
                term.powers.push_back(e.get<int>());
            }
            spec.monomials.push_back(std::move(term));
        }
        break;
    }
    case Family::tabulated: {
        reject_unknown_keys(params, where, {"x_min", "x_max", "n", "values"});
        for (const char* key : {"x_min", "x_max", "n", "values"})
            if (!params.contains(key))
                fail(where, std::string("missing key \"") + key + "\"");
        spec.table.x_min = number_list(params.at("x_min"), where + ".x_min");
        spec.table.x_max = number_list(params.at("x_max"), where + ".x_max");
        const json& n = params.at("n");
        if (!n.is_array()) fail(where + ".n", "expected an array of integers");
        for (const auto& e : n) {
            if (!e.is_number_integer())
                fail(where + ".n", "expected an array of integers");
            spec.table.n.push_back(e.get<int>());
        }
        spec.table.values =
            number_list(params.at("values"), where + ".values");
        break;
    }
    }
}

ScanSettings parse_scan(const json& s) {
    const std::string where = "scan";
    expect_object(s, where);
    reject_unknown_keys(s, where,
                        {"count", "inversion_symmetric", "pairs_min",
                         "pairs_max", "depth_min", "depth_max", "width_min",
                         "width_max", "center_max"});
    ScanSettings out;
    const long long count = integer_at(s, where, "count", 20, true);
    if (count < 0) fail(where + ".count", "must be >= 0");
    out.count = std::size_t(count);
    if (s.contains("inversion_symmetric")) {
        const json& v = s.at("inversion_symmetric");
        if (!v.is_boolean())
            fail(where + ".inversion_symmetric", "expected a boolean");
        out.inversion_symmetric = v.get<bool>();
    }
    out.pairs_min = int(integer_at(s, where, "pairs_min", out.pairs_min, false));
    out.pairs_max = int(integer_at(s, where, "pairs_max", out.pairs_max, false));
    out.depth_min = number_or(s, where, "depth_min", out.depth_min);
    out.depth_max = number_or(s, where, "depth_max", out.depth_max);
    out.width_min = number_or(s, where, "width_min", out.width_min);
    out.width_max = number_or(s, where, "width_max", out.width_max);
    out.center_max = number_or(s, where, "center_max", out.center_max);
    if (out.pairs_min < 1 || out.pairs_max < out.pairs_min)
        fail(where, "pairs_min/pairs_max must satisfy 1 <= min <= max");
    if (!(out.depth_min <= out.depth_max) || out.depth_max > 0.0)
        fail(where, "depths must satisfy depth_min <= depth_max <= 0");
    if (!(out.width_min > 0.0) || !(out.width_min <= out.width_max))
        fail(where, "widths must satisfy 0 < width_min <= width_max");
    if (out.center_max < 0.0) fail(where + ".center_max", "must be >= 0");
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("config: not valid JSON: ") + e.what());
    }
    expect_object(root, "top level");
    reject_unknown_keys(root, "top level",
                        {"dimension", "family", "parameters", "symmetry",
                         "axis", "kinetic_coefficient", "radial", "grid",
                         "scan"});

    RunConfig cfg;
    const long long dim = integer_at(root, "top level", "dimension", 0, true);
    if (dim < 1 || dim > 3) fail("dimension", "must be 1, 2 or 3");
    cfg.spec.dimension = int(dim);

    if (!root.contains("family")) fail("top level", "missing key \"family\"");
    if (!root.at("family").is_string()) fail("family", "expected a string");
    cfg.spec.family = family_from_name(root.at("family").get<std::string>());

    if (!root.contains("parameters"))
        fail("top level", "missing key \"parameters\"");
    parse_parameters(root.at("parameters"), cfg.spec);

    cfg.spec.kinetic_coefficient =
        number_or(root, "top level", "kinetic_coefficient", 0.5);
    if (!(cfg.spec.kinetic_coefficient > 0.0))
        fail("kinetic_coefficient", "must be positive");

    if (root.contains("symmetry")) {
        const json& s = root.at("symmetry");
        if (!s.is_string()) fail("symmetry", "expected a string tag");
        cfg.spec.declared_symmetry = s.get<std::string>();
        const PointGroupTag tag =
            PointGroupTag::parse(cfg.spec.declared_symmetry);
        if (!tag.valid_for_dimension(cfg.spec.dimension))
            fail("symmetry", "group " + tag.str() +
                                 " is not valid in dimension " +
                                 std::to_string(cfg.spec.dimension));
    }
    if (root.contains("axis")) {
        if (!root.contains("symmetry"))
            fail("axis", "an axis needs a declared symmetry group");
        const std::vector<double> a =
            number_list(root.at("axis"), "axis");
        if (a.size() != 3) fail("axis", "expected three components");
        cfg.spec.symmetry_axis = {a[0], a[1], a[2]};
    }

    if (root.contains("radial")) {
        const json& r = expect_object(root.at("radial"), "radial");
        reject_unknown_keys(r, "radial", {"r_max", "n_points", "n_channels"});
        cfg.radial.r_max = number_or(r, "radial", "r_max", cfg.radial.r_max);
        if (!(cfg.radial.r_max > 0.0)) fail("radial.r_max", "must be positive");
        const long long np = integer_at(r, "radial", "n_points",
                                        (long long)cfg.radial.n_points, false);
        if (np < 64) fail("radial.n_points", "must be >= 64");
        cfg.radial.n_points = std::size_t(np);
        const long long nc = integer_at(r, "radial", "n_channels",
                                        (long long)cfg.n_channels, false);
        if (nc < 2) fail("radial.n_channels", "must be >= 2");
        cfg.n_channels = std::size_t(nc);
    }

    cfg.grid.dimension = cfg.spec.dimension;
    if (root.contains("grid")) {
        const json& g = expect_object(root.at("grid"), "grid");
        reject_unknown_keys(g, "grid", {"L", "n", "k", "tol"});
        cfg.grid.L = number_or(g, "grid", "L", cfg.grid.L);
        if (!(cfg.grid.L > 0.0)) fail("grid.L", "must be positive");
        const long long n =
            integer_at(g, "grid", "n", (long long)cfg.grid.n, false);
        if (n < 8) fail("grid.n", "must be >= 8");
        cfg.grid.n = std::size_t(n);
        const long long k = integer_at(g, "grid", "k", (long long)cfg.k, false);
        if (k < 2) fail("grid.k", "must be >= 2");
        cfg.k = std::size_t(k);
        cfg.tol = number_or(g, "grid", "tol", cfg.tol);
        if (!(cfg.tol > 0.0) || cfg.tol > 1e-2)
            fail("grid.tol", "must be in (0, 1e-2]");
    }

    if (root.contains("scan")) {
        cfg.scan = parse_scan(root.at("scan"));
        cfg.has_scan = true;
    }

    validate(cfg.spec);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace vbar
