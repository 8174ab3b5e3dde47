#include "cyclebound/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "cyclebound/dickman.hpp"
#include "cyclebound/exact_count.hpp"
#include "cyclebound/saddle.hpp"
#include "cyclebound/series.hpp"

namespace cyclebound {

const char* regime_name(Regime m) {
    switch (m) {
        case Regime::small_r: return "small_r";
        case Regime::saddle: return "saddle";
        case Regime::dickman: return "dickman";
    }
    return "?";
}

Regime select_regime(std::int64_t n, std::int64_t r) {
    if (n < 1 || r < 1 || r > n) throw std::invalid_argument("select_regime: require 1 <= r <= n");
    const double ln = std::log(static_cast<double>(n));
    if (static_cast<double>(r) <= std::ceil(ln)) return Regime::small_r;
    if (static_cast<double>(r) >= std::sqrt(static_cast<double>(n) * ln)) return Regime::dickman;
    return Regime::saddle;
}

RRule RRule::parse(const std::string& token) {
    if (token == "logn" || token == "log") return RRule{Kind::log_n, 0, 0.0};
    if (token == "sqrtn" || token == "sqrt") return RRule{Kind::sqrt_n, 0, 0.0};
    if (token == "sqrtnlogn") return RRule{Kind::sqrt_n_log_n, 0, 0.0};
    if (token == "n") return RRule{Kind::fraction_of_n, 0, 1.0};
    if (token.rfind("n/", 0) == 0) {
        const double den = std::stod(token.substr(2));
        if (!(den >= 1.0)) throw std::invalid_argument("RRule: bad fraction '" + token + "'");
        return RRule{Kind::fraction_of_n, 0, 1.0 / den};
    }
    std::size_t pos = 0;
    const long long v = std::stoll(token, &pos);
    if (pos != token.size() || v < 1) throw std::invalid_argument("RRule: bad token '" + token + "'");
    return explicit_r(v);
}

std::int64_t resolve_r(const RRule& rule, std::int64_t n) {
    std::int64_t r = 1;
    const double ln = std::log(static_cast<double>(n));
    switch (rule.kind) {
        case RRule::Kind::explicit_value: r = rule.value; break;
        case RRule::Kind::log_n: r = static_cast<std::int64_t>(std::ceil(ln)); break;
        case RRule::Kind::sqrt_n:
            r = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
            break;
        case RRule::Kind::sqrt_n_log_n:
            r = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n) * ln)));
            break;
        case RRule::Kind::fraction_of_n:
            r = static_cast<std::int64_t>(std::llround(rule.fraction * static_cast<double>(n)));
            break;
    }
    return std::clamp<std::int64_t>(r, 1, n);
}

LogValue best_estimate(std::int64_t n, std::int64_t r) {
    switch (select_regime(n, r)) {
        case Regime::small_r: {
            const LogValue t1 = small_r_count_estimate(n, r);
            return LogValue::from_log(t1.log() - std::lgamma(static_cast<double>(n) + 1.0) -
                                      harmonic_number(r));
        }
        case Regime::dickman:
            return dickman_estimate(n, r);
        case Regime::saddle:
        default:
            return saddle_estimate(n, r);
    }
}

namespace {

double rel_err(double est_log, double exact_log) {
    return std::abs(std::expm1(est_log - exact_log));
}

ComparisonRecord evaluate_cell(std::int64_t n, std::int64_t r, const GridSpec& spec) {
    ComparisonRecord rec;
    rec.n = n;
    rec.r = r;
    rec.u = static_cast<double>(n) / static_cast<double>(r);
    rec.regime = select_regime(n, r);

    switch (spec.exact_mode) {
        case ExactMode::bigint:
            if (n <= kMaxExactCountN) {
                try {
                    const CycleBoundCount c = exact_count(n, r);
                    rec.exact_log = mpz_log(c.count) - std::lgamma(static_cast<double>(n) + 1.0) -
                                    harmonic_number(r);
                } catch (const std::exception& e) {
                    rec.errors.emplace_back(std::string("exact: ") + e.what());
                }
            }
            break;
        case ExactMode::floating:
            if (n <= kMaxNuLogN) {
                try {
                    rec.exact_log = poisson_local_prob_log(n, r).log();
                } catch (const std::exception& e) {
                    rec.errors.emplace_back(std::string("exact: ") + e.what());
                }
            }
            break;
        case ExactMode::off: break;
    }

    const double ln = std::log(static_cast<double>(n));
    if (static_cast<double>(r) <= std::ceil(ln)) {
        try {
            const LogValue t1 = small_r_count_estimate(n, r);
            rec.t1_log = t1.log() - std::lgamma(static_cast<double>(n) + 1.0) - harmonic_number(r);
        } catch (const std::exception& e) {
            rec.errors.emplace_back(std::string("t1: ") + e.what());
        }
    }
    try {
        rec.t2_log = saddle_estimate(n, r).log();
    } catch (const std::exception& e) {
        rec.errors.emplace_back(std::string("t2: ") + e.what());
    }
    if (rec.u <= kMaxRhoU) {
        try {
            rec.t3_log = dickman_estimate(n, r).log();
        } catch (const std::exception& e) {
            rec.errors.emplace_back(std::string("t3: ") + e.what());
        }
    }
    if (r >= 2 && rec.u > 1.0) {
        try {
            rec.c1_log = dickman_xi_estimate(n, r).log();
        } catch (const std::exception& e) {
            rec.errors.emplace_back(std::string("c1: ") + e.what());
        }
    }

    if (rec.exact_log) {
        if (rec.t1_log) rec.rel_err_t1 = rel_err(*rec.t1_log, *rec.exact_log);
        if (rec.t2_log) rec.rel_err_t2 = rel_err(*rec.t2_log, *rec.exact_log);
        if (rec.t3_log) rec.rel_err_t3 = rel_err(*rec.t3_log, *rec.exact_log);
        if (rec.c1_log) rec.rel_err_c1 = rel_err(*rec.c1_log, *rec.exact_log);
    }
    return rec;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt17(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

std::string opt_json(const std::optional<double>& v) { return v ? fmt17(*v) : std::string("null"); }

} // namespace

std::vector<ComparisonRecord> run_grid(const GridSpec& spec) {
    if (spec.n_values.empty()) throw std::invalid_argument("run_grid: empty n_values");
    std::vector<std::int64_t> ns = spec.n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.front() < 1) throw std::invalid_argument("run_grid: n values must be >= 1");

    std::vector<ComparisonRecord> out;
    for (const std::int64_t n : ns) {
        std::set<std::int64_t> rs;
        for (const RRule& rule : spec.r_rules) rs.insert(resolve_r(rule, n));
        for (const std::int64_t r : rs) out.push_back(evaluate_cell(n, r, spec));
    }
    return out;
}

void emit_csv(const std::vector<ComparisonRecord>& records, std::ostream& out) {
    out << "n,r,u,regime,exact_log,t1_log,t2_log,t3_log,c1_log,"
           "rel_err_t1,rel_err_t2,rel_err_t3,rel_err_c1\n";
    for (const ComparisonRecord& rec : records) {
        out << rec.n << ',' << rec.r << ',' << fmt17(rec.u) << ',' << regime_name(rec.regime)
            << ',' << opt17(rec.exact_log) << ',' << opt17(rec.t1_log) << ','
            << opt17(rec.t2_log) << ',' << opt17(rec.t3_log) << ',' << opt17(rec.c1_log) << ','
            << opt17(rec.rel_err_t1) << ',' << opt17(rec.rel_err_t2) << ','
            << opt17(rec.rel_err_t3) << ',' << opt17(rec.rel_err_c1) << '\n';
    }
}

void emit_json(const std::vector<ComparisonRecord>& records, std::ostream& out) {
    out << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const ComparisonRecord& rec = records[i];
        out << "  {\"n\": " << rec.n << ", \"r\": " << rec.r << ", \"u\": " << fmt17(rec.u)
            << ", \"regime\": \"" << regime_name(rec.regime) << '"'
            << ", \"exact_log\": " << opt_json(rec.exact_log)
            << ", \"t1_log\": " << opt_json(rec.t1_log)
            << ", \"t2_log\": " << opt_json(rec.t2_log)
            << ", \"t3_log\": " << opt_json(rec.t3_log)
            << ", \"c1_log\": " << opt_json(rec.c1_log)
            << ", \"rel_err_t1\": " << opt_json(rec.rel_err_t1)
            << ", \"rel_err_t2\": " << opt_json(rec.rel_err_t2)
            << ", \"rel_err_t3\": " << opt_json(rec.rel_err_t3)
            << ", \"rel_err_c1\": " << opt_json(rec.rel_err_c1) << '}'
            << (i + 1 == records.size() ? "\n" : ",\n");
    }
    out << "]\n";
}

void emit(const std::vector<ComparisonRecord>& records, EmitFormat format,
          const std::string& path) {
    if (records.empty()) throw std::invalid_argument("emit: no records");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
    if (format == EmitFormat::csv) emit_csv(records, out);
    else emit_json(records, out);
    out.flush();
    if (!out) throw std::runtime_error("emit: write to '" + path + "' failed");
}

bool any_failures(const std::vector<ComparisonRecord>& records) {
    for (const ComparisonRecord& rec : records) {
        if (!rec.errors.empty()) return true;
    }
    return false;
}

} // namespace cyclebound
