#include "vbar/config.hpp"
#include "vbar/errors.hpp"
#include "vbar/report.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw vbar::InputError("cannot open output file: " + path);
    out << text;
    if (!out)
        throw vbar::InputError("failed writing output file: " + path);
}

} // namespace

int main(int argc, char** argv) {
    // Byte-identical reports are part of the output contract; a threaded
    // BLAS would make reduction order (and low bits) machine-load dependent.
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"Bound-state comparison between an anisotropic potential "
                 "and its angular average"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string dump_prefix;
    std::uint64_t verify_seed = 1234;
    std::uint64_t scan_seed = 42;
    std::size_t jobs = 1;
    long long grid_n_override = -1;
    double grid_l_override = -1.0;

    auto add_common = [&](CLI::App* sub, std::uint64_t* seed) {
        sub->add_option("--config", config_path, "JSON run configuration")
            ->required();
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--seed", *seed, "deterministic seed");
        sub->add_option("--grid-n", grid_n_override,
                        "override grid.n from the config");
        sub->add_option("--grid-L", grid_l_override,
                        "override grid.L from the config");
    };

    CLI::App* verify = app.add_subcommand(
        "verify", "full pipeline on one spec: averages, both spectra, "
                  "coupling analysis, verdicts (JSON report)");
    add_common(verify, &verify_seed);
    verify->add_option("--dump-psi", dump_prefix,
                       "write fine-grid wavefunctions to <prefix>psi0.bin "
                       "and <prefix>psi1.bin");

    CLI::App* scan = app.add_subcommand(
        "scan", "draw randomized wells from the config's scan block and "
                "verify each (CSV summary + <out>.reports.json)");
    add_common(scan, &scan_seed);
    scan->add_option("--jobs", jobs, "concurrent spec pipelines");

    CLI::App* average = app.add_subcommand(
        "average", "tabulate the angular average and its zero-mean residual "
                   "(CSV)");
    add_common(average, &verify_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        vbar::RunConfig cfg = vbar::load_config(config_path);
        if (grid_n_override > 0) {
            if (grid_n_override < 8)
                throw vbar::InputError("--grid-n must be at least 8");
            cfg.grid.n = std::size_t(grid_n_override);
        }
        if (grid_l_override > 0.0) cfg.grid.L = grid_l_override;

        if (app.got_subcommand(verify)) {
            vbar::VerifyOptions opt;
            opt.seed = verify_seed;
            opt.dump_psi_prefix = dump_prefix;
            const vbar::RunOutcome res = vbar::run_verify(cfg, opt);
            write_text(out_path, res.report_json);
            return res.exit_code;
        }
        if (app.got_subcommand(scan)) {
            vbar::ScanOptions opt;
            opt.seed = scan_seed;
            opt.jobs = jobs;
            const vbar::ScanOutcome res = vbar::run_scan(cfg, opt);
            write_text(out_path, res.csv);
            if (!out_path.empty())
                write_text(out_path + ".reports.json", res.reports_json);
            return res.exit_code;
        }
        write_text(out_path, vbar::run_average(cfg));
        return 0;
    } catch (const vbar::InputError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const vbar::ConvergenceError& e) {
        std::cerr << "solver failed to converge: " << e.what() << '\n';
        return 3;
    } catch (const vbar::DiagnosticError& e) {
        std::cerr << "internal self-check failed: " << e.what() << '\n';
        return 4;
    }
}
