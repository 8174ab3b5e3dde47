#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclebound/log_value.hpp"

namespace cyclebound {

// Which asymptotic owns the cell: small_r for r <= ceil(log n), dickman for
// r >= sqrt(n log n), saddle in between. (For tiny n the first two ranges can
// overlap; small_r wins.)
enum class Regime { small_r, saddle, dickman };

const char* regime_name(Regime m);
Regime select_regime(std::int64_t n, std::int64_t r);

// One grid cell. All estimate columns are logs of P(l_r(Z) = n); a column is
// present exactly when its estimator's precondition held. rel_err columns
// are |exp(est - exact) - 1|, present when both sides are.
struct ComparisonRecord {
    std::int64_t n = 0;
    std::int64_t r = 0;
    double u = 0.0;
    Regime regime = Regime::saddle;
    std::optional<double> exact_log;
    std::optional<double> t1_log; // small-r expansion, converted to log P
    std::optional<double> t2_log; // saddle-point estimate
    std::optional<double> t3_log; // Dickman estimate
    std::optional<double> c1_log; // xi-form Dickman estimate
    std::optional<double> rel_err_t1;
    std::optional<double> rel_err_t2;
    std::optional<double> rel_err_t3;
    std::optional<double> rel_err_c1;
    // Not serialized: set when an estimator failed numerically rather than
    // being out of its domain. The grid never aborts on these.
    std::vector<std::string> errors;
};

// Rules for deriving the r list of a row from n.
struct RRule {
    enum class Kind { explicit_value, log_n, sqrt_n, sqrt_n_log_n, fraction_of_n };
    Kind kind = Kind::explicit_value;
    std::int64_t value = 0;  // explicit_value
    double fraction = 1.0;   // fraction_of_n

    static RRule explicit_r(std::int64_t v) { return RRule{Kind::explicit_value, v, 0.0}; }
    static RRule parse(const std::string& token); // "12" | "logn" | "sqrtn" | "sqrtnlogn" | "n" | "n/2"
};

std::int64_t resolve_r(const RRule& rule, std::int64_t n);

enum class ExactMode { bigint, floating, off };

struct GridSpec {
    std::vector<std::int64_t> n_values; // nonempty; normalized ascending
    std::vector<RRule> r_rules;
    ExactMode exact_mode = ExactMode::bigint;
    double tol = 1e-13;
};

// Dispatches on the regime: small_r -> small-r expansion (converted to log P
// by subtracting log n! and H_r), dickman -> Dickman estimate, otherwise the
// saddle-point estimate (which is also the fallback whenever the preferred
// estimator cannot run).
LogValue best_estimate(std::int64_t n, std::int64_t r);

// Evaluates every cell of the grid. Output is ordered by (n, r) ascending
// regardless of evaluation order; per-cell failures are recorded in the row.
std::vector<ComparisonRecord> run_grid(const GridSpec& spec);

// CSV columns, exactly:
// n,r,u,regime,exact_log,t1_log,t2_log,t3_log,c1_log,
// rel_err_t1,rel_err_t2,rel_err_t3,rel_err_c1
// Reals carry 17 significant digits; absent values are empty cells (CSV) or
// null (JSON).
void emit_csv(const std::vector<ComparisonRecord>& records, std::ostream& out);
void emit_json(const std::vector<ComparisonRecord>& records, std::ostream& out);

enum class EmitFormat { csv, json };
void emit(const std::vector<ComparisonRecord>& records, EmitFormat format,
          const std::string& path);

// True when any record carries a numerical failure; drives the CLI exit code.
bool any_failures(const std::vector<ComparisonRecord>& records);

} // namespace cyclebound
