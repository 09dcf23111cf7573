// SPDX-License-Identifier: Apache-2.0
//
// entrobound — relative entropy, the bivariate cumulant generating
// function and its rate function for finite-support measures on the real
// line, plus a verification suite for the entropy lower bound
// H(mu|rho) >= m1(mu)^2 / (2 m2(mu)) over symmetric rho.
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 parse error, 3 precondition error, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entrobound/entrobound.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParseError = 2;
constexpr int kExitPreconditionError = 3;
constexpr int kExitIoError = 4;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!std::cout) throw entrobound::io_error("failed writing to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw entrobound::io_error("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw entrobound::io_error("failed writing output file: " + path);
}

int cmd_entropy(const std::string& mu_spec, const std::string& rho_spec) {
    const entrobound::DiscreteMeasure mu = entrobound::parse_spec(mu_spec);
    const entrobound::DiscreteMeasure rho = entrobound::parse_spec(rho_spec);
    const entrobound::EntropyResult h = entrobound::relative_entropy(mu, rho);
    const double f = entrobound::jensen_bound(mu);
    const entrobound::MomentPair m = entrobound::moments(mu);
    std::printf("H   %s\n", entrobound::format_short(h.value).c_str());
    std::printf("F   %s\n", entrobound::format_short(f).c_str());
    std::printf("m1  %s\n", entrobound::format_short(m.x).c_str());
    std::printf("m2  %s\n", entrobound::format_short(m.y).c_str());
    return kExitPass;
}

int cmd_cramer(const std::string& rho_spec, double x, double y) {
    const entrobound::DiscreteMeasure rho = entrobound::parse_spec(rho_spec);
    const entrobound::CramerResult result = entrobound::cramer_transform(rho, {x, y});
    std::printf("I           %s\n", entrobound::format_short(result.value).c_str());
    if (result.argmax.has_value()) {
        std::printf("argmax      (%s, %s)\n", entrobound::format_short(result.argmax->u).c_str(),
                    entrobound::format_short(result.argmax->v).c_str());
    } else {
        std::printf("argmax      %s\n", entrobound::to_string(result.region));
    }
    std::printf("iterations  %d\n", result.iterations);
    std::printf("converged   %s\n", result.converged ? "yes" : "no");
    if (y != 0.0 && entrobound::is_symmetric(rho)) {
        std::printf("W           %s\n",
                    entrobound::format_short(entrobound::witness_bound(rho, x, y)).c_str());
    }
    return kExitPass;
}

int cmd_verify(const std::string& suite, std::optional<std::uint64_t> seed,
               const std::string& out_path, const std::string& format) {
    entrobound::SuiteConfig cfg = suite == "default" ? entrobound::default_suite_config()
                                                     : entrobound::load_suite_config(suite);
    if (seed.has_value()) cfg.seed = *seed;
    const entrobound::VerificationReport report = entrobound::run_suite(cfg);
    std::string rendered;
    if (format == "json") {
        rendered = entrobound::to_json(report);
    } else if (format == "csv") {
        rendered = entrobound::to_csv(report);
    } else {
        rendered = entrobound::to_table(report);
    }
    write_output(out_path, rendered);
    return report.all_passed() ? kExitPass : kExitCheckFailed;
}

int cmd_sweep(const std::string& rho_spec, const std::string& what, const std::string& out_path,
              int nx, int ny, double shrink, std::optional<double> x_max,
              std::optional<double> y_max) {
    const entrobound::DiscreteMeasure rho = entrobound::parse_spec(rho_spec);
    if (!entrobound::is_symmetric(rho))
        throw entrobound::domain_error("sweep requires a symmetric measure");

    entrobound::MomentGrid grid = entrobound::default_moment_grid(rho, nx, ny, shrink);
    if (x_max.has_value()) {
        if (!(*x_max > 0.0)) throw entrobound::domain_error("--x-max must be positive");
        grid.xs.clear();
        if (nx == 1) {
            grid.xs.push_back(0.0);
        } else if (nx % 2 == 1) {
            const int half = nx / 2;
            for (int i = -half; i <= half; ++i)
                grid.xs.push_back(static_cast<double>(i) * (*x_max / half));
        } else {
            for (int i = 0; i < nx; ++i)
                grid.xs.push_back(-*x_max + 2.0 * *x_max * i / (nx - 1));
        }
    }
    if (y_max.has_value()) {
        if (!(*y_max > 0.0)) throw entrobound::domain_error("--y-max must be positive");
        grid.ys.clear();
        for (int k = 1; k <= ny; ++k)  // y in (0, y_max]
            grid.ys.push_back(*y_max * static_cast<double>(k) / ny);
    }

    const std::vector<entrobound::SweepPoint> rows = entrobound::grid_sweep(rho, grid);
    std::string csv = "x,y,I,xx_over_2y,G,margin\n";
    for (const entrobound::SweepPoint& p : rows) {
        csv += entrobound::format_full(p.x) + ',' + entrobound::format_full(p.y) + ',' +
               entrobound::format_full(p.rate) + ',' + entrobound::format_full(p.bound) + ',' +
               entrobound::format_full(p.g) + ',' + entrobound::format_full(p.g) + '\n';
    }
    write_output(out_path, csv);

    const entrobound::CheckRecord verdict =
        what == "min-g"
            ? entrobound::detail::summarize_min_g(rho_spec, rows, grid,
                                                  entrobound::moments(rho).y, 0.0)
            : entrobound::detail::summarize_proposition(rho_spec, rows, 0.0);
    return verdict.passed ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative entropy bounds and the bivariate rate function "
                 "for finite-support measures"};
    app.require_subcommand(1);

    std::string mu_spec;
    std::string rho_spec;
    double x = 0.0;
    double y = 0.0;
    std::string suite = "default";
    std::uint64_t seed_value = 0;
    std::string out_path = "-";
    std::string format = "json";
    std::string what = "proposition";
    int nx = 39;
    int ny = 39;
    double shrink = 0.95;
    double x_max_value = 0.0;
    double y_max_value = 0.0;

    CLI::App* entropy = app.add_subcommand("entropy", "relative entropy H(mu|rho) and the "
                                                      "moment functional F(mu)");
    entropy->add_option("--mu", mu_spec, "measure spec for mu")->required();
    entropy->add_option("--rho", rho_spec, "measure spec for rho")->required();

    CLI::App* cramer = app.add_subcommand("cramer", "rate function I(x, y) of (Z, Z^2)");
    cramer->add_option("--rho", rho_spec, "measure spec for rho")->required();
    cramer->add_option("--x", x, "first moment coordinate")->required();
    cramer->add_option("--y", y, "second moment coordinate")->required();

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite and write a report");
    verify->add_option("--suite", suite, "'default' or a path to a JSON suite config");
    CLI::Option* seed_opt = verify->add_option("--seed", seed_value, "override the suite seed");
    verify->add_option("--out", out_path, "report path ('-' for stdout)");
    verify->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv", "table"}));

    CLI::App* sweep = app.add_subcommand("sweep", "grid sweep over the moment plane (CSV)");
    sweep->add_option("--rho", rho_spec, "measure spec for rho (symmetric)")->required();
    sweep->add_option("--what", what, "which verdict to apply")
        ->check(CLI::IsMember({"proposition", "min-g"}));
    sweep->add_option("--out", out_path, "CSV path ('-' for stdout)");
    sweep->add_option("--nx", nx, "grid points along x")->check(CLI::PositiveNumber);
    sweep->add_option("--ny", ny, "grid points along y")->check(CLI::PositiveNumber);
    sweep->add_option("--shrink", shrink, "fraction of the hull extent to cover");
    CLI::Option* x_max_opt = sweep->add_option("--x-max", x_max_value, "override x range");
    CLI::Option* y_max_opt = sweep->add_option("--y-max", y_max_value, "override y range");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParseError;
    }

    try {
        if (entropy->parsed()) return cmd_entropy(mu_spec, rho_spec);
        if (cramer->parsed()) return cmd_cramer(rho_spec, x, y);
        if (verify->parsed()) {
            std::optional<std::uint64_t> seed;
            if (seed_opt->count() > 0) seed = seed_value;
            return cmd_verify(suite, seed, out_path, format);
        }
        if (sweep->parsed()) {
            std::optional<double> xm;
            std::optional<double> ym;
            if (x_max_opt->count() > 0) xm = x_max_value;
            if (y_max_opt->count() > 0) ym = y_max_value;
            return cmd_sweep(rho_spec, what, out_path, nx, ny, shrink, xm, ym);
        }
    } catch (const entrobound::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParseError;
    } catch (const entrobound::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParseError;
    } catch (const entrobound::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const entrobound::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPreconditionError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPreconditionError;
    }
    return kExitPass;
}
