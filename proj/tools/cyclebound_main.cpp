// Command-line front end: one verb per module plus the comparison driver.
//   exact    - ground-truth counts and log probabilities
//   saddle   - saddle-point solution, lambda_k, log Q, local estimate
//   dickman  - xi, I(xi), rho by table and by asymptotic, Dickman estimates
//   coeffs   - inversion coefficient families for one r
//   estimate - regime selection and all applicable estimates for one cell
//   compare  - (n, r) grid against exact values, CSV/JSON error tables
//
// Exit codes: 0 success, 1 numerical failure (rows still emitted), 2 usage.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cyclebound/dickman.hpp"
#include "cyclebound/exact_count.hpp"
#include "cyclebound/harness.hpp"
#include "cyclebound/log_value.hpp"
#include "cyclebound/saddle.hpp"
#include "cyclebound/series.hpp"

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

// key/value rows rendered as text, csv, or a flat json object
struct Report {
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<bool> is_number;
    void add(const std::string& k, const std::string& v) {
        rows.emplace_back(k, v);
        is_number.push_back(false);
    }
    void add(const std::string& k, double v) {
        rows.emplace_back(k, fmt17(v));
        is_number.push_back(true);
    }
    void add(const std::string& k, std::int64_t v) {
        rows.emplace_back(k, std::to_string(v));
        is_number.push_back(true);
    }

    void print(const std::string& format, std::ostream& os) const {
        if (format == "json") {
            os << "{";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& [k, v] = rows[i];
                os << '"' << k << "\": ";
                if (is_number[i]) os << v;
                else os << '"' << v << '"';
                if (i + 1 < rows.size()) os << ", ";
            }
            os << "}\n";
        } else if (format == "csv") {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                os << rows[i].first << (i + 1 < rows.size() ? "," : "\n");
            }
            for (std::size_t i = 0; i < rows.size(); ++i) {
                os << rows[i].second << (i + 1 < rows.size() ? "," : "\n");
            }
        } else {
            for (const auto& [k, v] : rows) os << k << " = " << v << "\n";
        }
    }
};

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    return file;
}

} // namespace

int main(int argc, char** argv) {
    using namespace cyclebound;

    CLI::App app{"probability that a random permutation of n elements has no cycle longer than r"};
    app.require_subcommand(1);

    std::int64_t n = 0, r = 0, nmax = -1;
    double u_arg = -1.0, tol = 1e-13;
    std::string format = "text", out_path, n_list, r_list = "1,2,3,logn,sqrtn,n/2,n";
    std::string exact_mode = "bigint";
    int digits = 30;

    auto* exact_cmd = app.add_subcommand("exact", "exact counts and probabilities");
    exact_cmd->add_option("--n", n, "number of elements")->required();
    exact_cmd->add_option("--r", r, "largest allowed cycle length")->required();
    exact_cmd->add_option("--digits", digits, "oracle working digits [15,50]");
    exact_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
    exact_cmd->add_option("--out", out_path, "write to file instead of stdout");

    auto* saddle_cmd = app.add_subcommand("saddle", "saddle-point solution and local estimate");
    saddle_cmd->add_option("--n", n)->required();
    saddle_cmd->add_option("--r", r)->required();
    saddle_cmd->add_option("--tol", tol, "relative residual tolerance");
    saddle_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
    saddle_cmd->add_option("--out", out_path);

    auto* dickman_cmd = app.add_subcommand("dickman", "xi, rho, and the Dickman estimates");
    dickman_cmd->add_option("--u", u_arg, "evaluate at u directly");
    dickman_cmd->add_option("--n", n);
    dickman_cmd->add_option("--r", r);
    dickman_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
    dickman_cmd->add_option("--out", out_path);

    auto* coeffs_cmd = app.add_subcommand("coeffs", "inversion coefficient table for one r");
    coeffs_cmd->add_option("--r", r)->required();
    coeffs_cmd->add_option("--nmax", nmax, "largest index (default 4r)");
    coeffs_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
    coeffs_cmd->add_option("--out", out_path);

    auto* estimate_cmd = app.add_subcommand("estimate", "regime and estimates for one (n, r)");
    estimate_cmd->add_option("--n", n)->required();
    estimate_cmd->add_option("--r", r)->required();
    estimate_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
    estimate_cmd->add_option("--out", out_path);

    auto* compare_cmd = app.add_subcommand("compare", "grid of estimates against exact values");
    compare_cmd->add_option("--n-list", n_list, "comma-separated n values")->required();
    compare_cmd->add_option("--r-list", r_list,
                            "comma-separated r rules: integers, logn, sqrtn, sqrtnlogn, n, n/2, ...");
    compare_cmd->add_option("--exact-mode", exact_mode)
        ->check(CLI::IsMember({"bigint", "float", "off"}));
    compare_cmd->add_option("--tol", tol);
    compare_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    compare_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::ofstream file;
        if (exact_cmd->parsed()) {
            Report rep;
            rep.add("n", n);
            rep.add("r", r);
            if (n <= kMaxExactCountN) {
                const CycleBoundCount c = exact_count(n, r);
                rep.add("count", c.count.get_str());
                rep.add("log_count", mpz_log(c.count));
            }
            rep.add("nu_log", nu_log(n, r).log());
            rep.add("poisson_local_prob_log", poisson_local_prob_log(n, r).log());
            if (n <= kMaxCoefficientOracleN) {
                rep.add("coefficient_oracle_log", coefficient_oracle(n, r, digits).log());
            }
            rep.print(format, open_sink(file, out_path));
            return 0;
        }
        if (saddle_cmd->parsed()) {
            const SaddleSolution s = solve_saddle(n, r, tol);
            Report rep;
            rep.add("n", n);
            rep.add("r", r);
            rep.add("u", s.u);
            rep.add("x", s.x);
            rep.add("residual", s.residual);
            rep.add("iterations", static_cast<std::int64_t>(s.iterations));
            rep.add("lambda1", s.lambda[0]);
            rep.add("lambda2", s.lambda[1]);
            rep.add("lambda3", s.lambda[2]);
            rep.add("lambda4", s.lambda[3]);
            rep.add("log_q", s.log_q);
            rep.add("estimate_log", saddle_estimate(n, r).log());
            rep.add("decomposition_defect", log_q_decomposition_defect(n, r));
            rep.print(format, open_sink(file, out_path));
            return 0;
        }
        if (dickman_cmd->parsed()) {
            Report rep;
            double u = u_arg;
            if (u < 0.0) {
                if (n <= 0 || r <= 0) {
                    std::cerr << "dickman: pass --u or both --n and --r\n";
                    return 2;
                }
                u = static_cast<double>(n) / static_cast<double>(r);
                rep.add("n", n);
                rep.add("r", r);
            }
            rep.add("u", u);
            if (u >= 1.0) {
                const XiValue xv = solve_xi(u);
                rep.add("xi", xv.xi);
                rep.add("xi_prime", xv.xi_prime);
                rep.add("i_xi", i_integral(xv.xi));
            }
            rep.add("log_rho", log_rho(u));
            rep.add("rho", std::exp(log_rho(u)));
            if (u >= 1.0) rep.add("log_rho_alladi", rho_alladi(u).log_rho);
            if (n > 0 && r > 0) {
                rep.add("dickman_estimate_log", dickman_estimate(n, r).log());
                if (r >= 2 && n > r) {
                    rep.add("dickman_xi_estimate_log", dickman_xi_estimate(n, r).log());
                }
            }
            rep.print(format, open_sink(file, out_path));
            return 0;
        }
        if (coeffs_cmd->parsed()) {
            const CoeffTable t = build_coeff_table(r, nmax);
            std::ostream& os = open_sink(file, out_path);
            if (format == "json") {
                os << "{\"r\": " << t.r << ", \"nmax\": " << t.nmax << ", \"rows\": [\n";
                for (std::int64_t N = -r; N <= t.nmax; ++N) {
                    os << "  {\"N\": " << N;
                    os << ", \"g\": "
                       << (N >= 0 ? fmt17(t.g[static_cast<std::size_t>(N)]) : "null");
                    os << ", \"b\": "
                       << (N >= 1 ? fmt17(t.b[static_cast<std::size_t>(N)]) : "null");
                    os << ", \"h\": " << fmt17(t.h_at(N));
                    os << ", \"lambda\": "
                       << (N >= 0 ? fmt17(t.lambda[static_cast<std::size_t>(N)]) : "null");
                    os << ", \"d\": "
                       << (N >= 0 && N <= r ? fmt17(t.d[static_cast<std::size_t>(N)]) : "null");
                    os << '}' << (N == t.nmax ? "\n" : ",\n");
                }
                os << "]}\n";
            } else {
                os << "N,g,b,h,lambda,d\n";
                for (std::int64_t N = -r; N <= t.nmax; ++N) {
                    os << N << ',';
                    if (N >= 0) os << fmt17(t.g[static_cast<std::size_t>(N)]);
                    os << ',';
                    if (N >= 1) os << fmt17(t.b[static_cast<std::size_t>(N)]);
                    os << ',' << fmt17(t.h_at(N)) << ',';
                    if (N >= 0) os << fmt17(t.lambda[static_cast<std::size_t>(N)]);
                    os << ',';
                    if (N >= 0 && N <= r) os << fmt17(t.d[static_cast<std::size_t>(N)]);
                    os << '\n';
                }
            }
            return 0;
        }
        if (estimate_cmd->parsed()) {
            Report rep;
            rep.add("n", n);
            rep.add("r", r);
            rep.add("u", static_cast<double>(n) / static_cast<double>(r));
            rep.add("regime", regime_name(select_regime(n, r)));
            rep.add("best_estimate_log", best_estimate(n, r).log());
            const double ln = std::log(static_cast<double>(n));
            if (static_cast<double>(r) <= std::ceil(ln)) {
                const double t1 = small_r_count_estimate(n, r).log() -
                                  std::lgamma(static_cast<double>(n) + 1.0) - harmonic_number(r);
                rep.add("t1_log", t1);
            }
            rep.add("t2_log", saddle_estimate(n, r).log());
            if (static_cast<double>(n) / static_cast<double>(r) <= kMaxRhoU) {
                rep.add("t3_log", dickman_estimate(n, r).log());
            }
            if (r >= 2 && n > r) rep.add("c1_log", dickman_xi_estimate(n, r).log());
            rep.print(format, open_sink(file, out_path));
            return 0;
        }
        if (compare_cmd->parsed()) {
            GridSpec spec;
            for (const std::string& tok : split_csv(n_list)) {
                spec.n_values.push_back(std::stoll(tok));
            }
            for (const std::string& tok : split_csv(r_list)) {
                spec.r_rules.push_back(RRule::parse(tok));
            }
            spec.tol = tol;
            spec.exact_mode = exact_mode == "bigint" ? ExactMode::bigint
                              : exact_mode == "float" ? ExactMode::floating
                                                      : ExactMode::off;
            if (format == "text") format = "csv";
            const auto records = run_grid(spec);
            std::ostream& os = open_sink(file, out_path);
            if (format == "json") emit_json(records, os);
            else emit_csv(records, os);
            for (const auto& rec : records) {
                for (const std::string& err : rec.errors) {
                    std::cerr << "cell n=" << rec.n << " r=" << rec.r << ": " << err << "\n";
                }
            }
            return any_failures(records) ? 1 : 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
