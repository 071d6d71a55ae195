#include <doctest.h>

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

// End-to-end tests of the installed command-line tool.  Every case drives
// the real binary (path injected as VBAR_CLI_PATH at compile time) through
// std::system and inspects only its observable contract: exit status, the
// JSON/CSV/binary files it writes, and stderr diagnostics.

using nlohmann::json;

namespace {

const std::string& work_dir() {
    static const std::string dir = [] {
        char tmpl[] = "/tmp/vbar-cli-test-XXXXXX";
        if (::mkdtemp(tmpl) == nullptr)
            throw std::runtime_error("mkdtemp failed");
        return std::string(tmpl);
    }();
    return dir;
}

std::string path_in(const std::string& name) { return work_dir() + "/" + name; }

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(bool(out));
    out << text;
    REQUIRE(bool(out));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "cannot read ", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

// Runs the CLI with the given arguments; stderr is captured into a file
// when a path is supplied, stdout is discarded (every case passes --out).
int run_cli(const std::string& args, const std::string& stderr_path = "") {
    std::string cmd = std::string("\"") + VBAR_CLI_PATH + "\" " + args +
                      " >/dev/null 2>" +
                      (stderr_path.empty() ? std::string("/dev/null")
                                           : stderr_path);
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

// omega = (1, 1, 2) oscillator: every level is known in closed form, and the
// whole pipeline finishes in well under a second at this resolution.
json harmonic_config() {
    return json{
        {"dimension", 3},
        {"family", "anisotropic_harmonic"},
        {"parameters", json{{"omegas", {1.0, 1.0, 2.0}}}},
        {"symmetry", "D4h"},
        {"kinetic_coefficient", 0.5},
        {"radial",
         json{{"r_max", 10.0}, {"n_points", 1200}, {"n_channels", 4}}},
        {"grid", json{{"L", 8.0}, {"n", 28}, {"k", 6}, {"tol", 1e-8}}}};
}

std::string write_config(const std::string& name, const json& cfg) {
    const std::string path = path_in(name);
    spit(path, cfg.dump(2) + "\n");
    return path;
}

std::vector<double> decode_doubles(const std::string& bytes) {
    REQUIRE(bytes.size() % 8 == 0);
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b)
            bits = (bits << 8) |
                   std::uint64_t(static_cast<unsigned char>(bytes[8 * i + b]));
        out[i] = std::bit_cast<double>(bits);
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<double> split_csv_row(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');)
        out.push_back(std::stod(cell));
    return out;
}

} // namespace

TEST_CASE("verify: harmonic spec passes with closed-form level anchors") {
    const std::string cfg = write_config("harm.json", harmonic_config());
    const std::string rep_path = path_in("harm_report.json");
    const int code =
        run_cli("verify --config " + cfg + " --out " + rep_path + " --seed 77");
    CHECK(code == 0);

    const json rep = load_json(rep_path);
    CHECK(rep.at("schema_version").get<int>() == 1);
    CHECK(rep.at("spec").at("family").get<std::string>() ==
          "anisotropic_harmonic");
    CHECK(rep.at("spec").at("dimension").get<int>() == 3);

    // Exact levels: averaged ground/excited 1.5*sqrt(2) and 2.5*sqrt(2),
    // full ground/excited 2 and 3 (the grid carries an O(h^2) offset).
    const double s2 = std::sqrt(2.0);
    CHECK(std::abs(rep.at("averaged").at("e0").at("value").get<double>() -
                   1.5 * s2) < 1e-4);
    CHECK(std::abs(rep.at("averaged").at("e1").at("value").get<double>() -
                   2.5 * s2) < 1e-4);
    CHECK(rep.at("averaged").at("e0").at("error").get<double>() > 0.0);
    CHECK(std::abs(rep.at("full").at("e0").at("value").get<double>() - 2.0) <
          0.05);
    CHECK(std::abs(rep.at("full").at("e1").at("value").get<double>() - 3.0) <
          0.10);

    CHECK(rep.at("verdicts").at("ground").at("verdict").get<std::string>() ==
          "holds");
    CHECK(rep.at("verdicts").at("excited").at("verdict").get<std::string>() ==
          "holds");
    CHECK(rep.at("verdicts").at("bound_state_exists").get<std::string>() ==
          "true");
    CHECK(rep.at("existence").at("mode").get<std::string>() == "confining");

    // The report must echo the run parameters it was produced with.
    CHECK(rep.at("settings").at("seed").get<std::uint64_t>() == 77);
    CHECK(rep.at("settings").at("grid").at("n").get<int>() == 28);
    CHECK(rep.at("settings")
              .at("grid")
              .at("residual_tolerance_rel")
              .get<double>() == 1e-8);

    const json& zm = rep.at("zero_mean_residual");
    CHECK(zm.at("value").get<double>() <= zm.at("tolerance").get<double>());
    CHECK(rep.at("timings_s").at("total_s").get<double>() > 0.0);
}

TEST_CASE("verify: repeat runs with one seed agree apart from timings") {
    const std::string cfg = write_config("harm_det.json", harmonic_config());
    const std::string rep1 = path_in("det1.json");
    const std::string rep2 = path_in("det2.json");
    CHECK(run_cli("verify --config " + cfg + " --out " + rep1 + " --seed 5") ==
          0);
    CHECK(run_cli("verify --config " + cfg + " --out " + rep2 + " --seed 5") ==
          0);
    json a = load_json(rep1);
    json b = load_json(rep2);
    a.erase("timings_s");
    b.erase("timings_s");
    CHECK(a == b);
}

TEST_CASE("verify --dump-psi: header, payload size and normalization") {
    const std::string cfg = write_config("harm_dump.json", harmonic_config());
    const std::string prefix = path_in("wf_");
    const int code = run_cli("verify --config " + cfg + " --out " +
                             path_in("dump_report.json") + " --dump-psi " +
                             prefix);
    CHECK(code == 0);

    const json rep = load_json(path_in("dump_report.json"));
    const int n = rep.at("full").at("box").at("n").get<int>();
    const double L = rep.at("full").at("box").at("L").get<double>();
    const double h = 2.0 * L / double(n + 1);

    std::vector<std::vector<double>> psi;
    for (const char* name : {"wf_psi0.bin", "wf_psi1.bin"}) {
        const std::string data = slurp(path_in(name));
        const std::size_t nl = data.find('\n');
        REQUIRE(nl != std::string::npos);

        // One-line ASCII header "dims: n1 n2 n3", then raw little-endian
        // doubles, row-major.
        std::ostringstream expect;
        expect << "dims: " << n << ' ' << n << ' ' << n;
        CHECK(data.substr(0, nl) == expect.str());

        const std::vector<double> values = decode_doubles(data.substr(nl + 1));
        CHECK(values.size() == std::size_t(n) * std::size_t(n) * std::size_t(n));

        double norm = 0.0;
        for (double v : values) norm += v * v;
        norm *= h * h * h;
        CHECK(std::abs(norm - 1.0) < 1e-8);
        psi.push_back(values);
    }

    // Ground and excited dumps must be orthogonal states, not copies.
    double overlap = 0.0;
    for (std::size_t i = 0; i < psi[0].size(); ++i)
        overlap += psi[0][i] * psi[1][i];
    CHECK(std::abs(overlap * h * h * h) < 1e-6);
}

TEST_CASE("average: CSV of the angular average with zero-mean residuals") {
    const std::string cfg = write_config("harm_avg.json", harmonic_config());
    const std::string out = path_in("avg.csv");
    CHECK(run_cli("average --config " + cfg + " --out " + out) == 0);

    const std::vector<std::string> lines = split_lines(slurp(out));
    REQUIRE(lines.size() == 202); // header + 201 radii
    CHECK(lines[0] == "r,v_bar,zero_mean_residual");

    // omega = (1,1,2), c = 1/2: the angular average is exactly r^2, and the
    // quadrature resolves a quadratic exactly, so residuals sit at rounding
    // level.  Radii run uniformly over [0, radial r_max].
    double prev_r = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<double> row = split_csv_row(lines[i]);
        REQUIRE(row.size() == 3);
        const double r = row[0];
        CHECK(r > prev_r);
        prev_r = r;
        CHECK(std::abs(row[1] - r * r) < 1e-6 * (1.0 + r * r));
        CHECK(row[2] <= 1e-8);
    }
    CHECK(split_csv_row(lines[1])[0] == 0.0);
    CHECK(std::abs(prev_r - 10.0) < 1e-12);
}

TEST_CASE("scan: repeat runs are byte-identical and reports carry verdicts") {
    json cfg = json{
        {"dimension", 3},
        {"family", "gaussian_well_sum"},
        {"parameters",
         json{{"terms",
               {json{{"depth", -5.0},
                     {"widths", {1.0, 1.0, 1.0}},
                     {"center", {0.0, 0.0, 0.0}}}}}}},
        {"radial",
         json{{"r_max", 14.0}, {"n_points", 1500}, {"n_channels", 4}}},
        {"grid", json{{"L", 7.0}, {"n", 32}, {"k", 6}, {"tol", 1e-8}}},
        {"scan",
         json{{"count", 2},
              {"pairs_min", 1},
              {"pairs_max", 2},
              {"depth_min", -8.0},
              {"depth_max", -4.0},
              {"width_min", 0.7},
              {"width_max", 1.5},
              {"center_max", 1.2}}}};
    const std::string cfg_path = write_config("scan.json", cfg);

    const std::string out1 = path_in("scan1.csv");
    const std::string out2 = path_in("scan2.csv");
    CHECK(run_cli("scan --config " + cfg_path + " --out " + out1 +
                  " --seed 7") == 0);
    CHECK(run_cli("scan --config " + cfg_path + " --out " + out2 +
                  " --seed 7") == 0);

    const std::string csv = slurp(out1);
    CHECK(csv == slurp(out2));
    CHECK(slurp(out1 + ".reports.json") == slurp(out2 + ".reports.json"));

    const std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 3); // header + one row per drawn well
    CHECK(lines[0] ==
          "index,parameters,n_bound_avg,e0bar,e0bar_err,e0,e0_err,"
          "ground_margin,ground_verdict,e1bar,e1bar_err,e1,e1_err,"
          "excited_margin,excited_verdict,bound_state_exists,lambda1,"
          "max_cross,trace_residual,second_order");

    const json reports = json::parse(slurp(out1 + ".reports.json"));
    REQUIRE(reports.is_array());
    REQUIRE(reports.size() == 2);
    for (const json& r : reports) {
        CHECK(r.at("schema_version").get<int>() == 1);
        CHECK(r.contains("verdicts"));
        // Byte-identical repeats only work because wall-clock data is
        // omitted from scan reports.
        CHECK(!r.contains("timings_s"));
        CHECK(r.at("verdicts").at("ground").at("verdict").get<std::string>() !=
              "violated");
    }
}

TEST_CASE("verify: --grid-n/--grid-L override the config and are echoed") {
    const std::string cfg = write_config("harm_ovr.json", harmonic_config());
    const std::string rep_path = path_in("ovr_report.json");
    CHECK(run_cli("verify --config " + cfg + " --out " + rep_path +
                  " --grid-n 20 --grid-L 6") == 0);

    const json rep = load_json(rep_path);
    CHECK(rep.at("settings").at("grid").at("n").get<int>() == 20);
    CHECK(rep.at("settings").at("grid").at("L").get<double>() == 6.0);

    // The box rule may still enlarge the solve region, but only by doubling
    // at fixed spacing: 2L/(n+1) must match the requested grid exactly.
    const int box_n = rep.at("full").at("box").at("n").get<int>();
    const double box_l = rep.at("full").at("box").at("L").get<double>();
    CHECK(box_n >= 20);
    CHECK(box_l >= 6.0);
    CHECK(2.0 * box_l / double(box_n + 1) ==
          doctest::Approx(2.0 * 6.0 / 21.0).epsilon(1e-13));
}

TEST_CASE("configuration errors exit with code 2 and a diagnostic") {
    const std::string err = path_in("stderr.txt");

    json with_extra = harmonic_config();
    with_extra["extra"] = 1;
    const std::string cfg_extra = write_config("bad_extra.json", with_extra);
    CHECK(run_cli("verify --config " + cfg_extra, err) == 2);
    CHECK(slurp(err).find("unknown key \"extra\"") != std::string::npos);

    const std::string cfg_syntax = path_in("bad_syntax.json");
    spit(cfg_syntax, "{ not json");
    CHECK(run_cli("verify --config " + cfg_syntax, err) == 2);
    CHECK(slurp(err).find("not valid JSON") != std::string::npos);

    CHECK(run_cli("verify --config " + path_in("no_such_file.json"), err) ==
          2);
    CHECK(slurp(err).find("cannot read") != std::string::npos);

    json bad_tol = harmonic_config();
    bad_tol["grid"]["tol"] = 0.5;
    const std::string cfg_tol = write_config("bad_tol.json", bad_tol);
    CHECK(run_cli("verify --config " + cfg_tol, err) == 2);
    CHECK(slurp(err).find("grid.tol") != std::string::npos);

    const std::string cfg_ok = write_config("ok.json", harmonic_config());
    CHECK(run_cli("verify --config " + cfg_ok + " --grid-n 4", err) == 2);
    CHECK(slurp(err).find("--grid-n") != std::string::npos);

    // A missing required flag is rejected by the argument parser itself.
    CHECK(run_cli("verify", err) != 0);
}

TEST_CASE("verify: unreachable tolerance exits 3 with a partial report") {
    json cfg = harmonic_config();
    cfg["grid"]["n"] = 12;       // small enough for the dense eigensolver
    cfg["grid"]["tol"] = 1e-30;  // below any attainable residual
    const std::string cfg_path = write_config("tight.json", cfg);
    const std::string rep_path = path_in("tight_report.json");
    CHECK(run_cli("verify --config " + cfg_path + " --out " + rep_path) == 3);

    // The report is still written: everything computed before the failure
    // stays, plus a machine-readable error object instead of verdicts.
    const json rep = load_json(rep_path);
    CHECK(rep.at("schema_version").get<int>() == 1);
    CHECK(rep.at("error").at("type").get<std::string>() == "convergence");
    CHECK(rep.contains("averaged"));
    CHECK(!rep.contains("verdicts"));
}
