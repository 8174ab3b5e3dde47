#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cyclebound/dickman.hpp"
#include "cyclebound/exact_count.hpp"
#include "cyclebound/harness.hpp"
#include "cyclebound/log_value.hpp"

using namespace cyclebound;

TEST_CASE("regime selection") {
    CHECK(select_regime(1000000, 5) == Regime::small_r);   // 5 <= ceil(log 1e6) = 14
    CHECK(select_regime(10000, 5000) == Regime::dickman);  // 5000 >= sqrt(1e4 log 1e4) ~ 304
    CHECK(select_regime(10000, 100) == Regime::saddle);
    CHECK(select_regime(10, 10) == Regime::dickman);
    CHECK_THROWS_AS(select_regime(10, 11), std::invalid_argument);
}

TEST_CASE("r rules") {
    CHECK(resolve_r(RRule::parse("17"), 100) == 17);
    CHECK(resolve_r(RRule::parse("17"), 5) == 5); // clamped to n
    CHECK(resolve_r(RRule::parse("logn"), 10000) == 10);
    CHECK(resolve_r(RRule::parse("sqrtn"), 10000) == 100);
    CHECK(resolve_r(RRule::parse("sqrtnlogn"), 10000) == 304);
    CHECK(resolve_r(RRule::parse("n"), 42) == 42);
    CHECK(resolve_r(RRule::parse("n/2"), 100) == 50);
    CHECK(resolve_r(RRule::parse("n/4"), 100) == 25);
    CHECK_THROWS_AS(RRule::parse("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(RRule::parse("0"), std::invalid_argument);
}

TEST_CASE("best estimate dispatch") {
    // small_r: the small-r expansion converted to log P
    {
        const double est = best_estimate(1000000, 5).log();
        CHECK(std::isfinite(est));
        const double regime_check = best_estimate(1000000, 5).log();
        CHECK(est == regime_check); // deterministic
    }
    // dickman cell equals the dickman estimator
    CHECK(best_estimate(10000, 5000).log() ==
          doctest::Approx(dickman_estimate(10000, 5000).log()));
    // boundary cells: estimates from both adjacent methods agree within the
    // sum of their tolerances
    for (std::int64_t n : {1000, 10000, 100000}) {
        const double ln = std::log(static_cast<double>(n));
        const std::int64_t r1 = static_cast<std::int64_t>(std::ceil(ln));
        {
            const GridSpec spec{{n}, {RRule::explicit_r(r1)}, ExactMode::off, 1e-13};
            const auto recs = run_grid(spec);
            REQUIRE(recs.size() == 1);
            REQUIRE(recs[0].t1_log.has_value());
            REQUIRE(recs[0].t2_log.has_value());
            const double tol = 5.0 * std::pow(static_cast<double>(n),
                                              -1.0 / static_cast<double>(r1)) +
                               5.0 * static_cast<double>(r1) / static_cast<double>(n);
            CHECK(std::abs(std::expm1(*recs[0].t1_log - *recs[0].t2_log)) <= tol);
        }
        {
            const std::int64_t r2 =
                static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n) * ln)));
            const GridSpec spec{{n}, {RRule::explicit_r(r2)}, ExactMode::off, 1e-13};
            const auto recs = run_grid(spec);
            REQUIRE(recs.size() == 1);
            REQUIRE(recs[0].t2_log.has_value());
            REQUIRE(recs[0].t3_log.has_value());
            const double tol =
                5.0 * static_cast<double>(r2) / static_cast<double>(n) +
                5.0 * static_cast<double>(n) *
                    std::log(static_cast<double>(n) / static_cast<double>(r2) + 1.0) /
                    (static_cast<double>(r2) * static_cast<double>(r2));
            CHECK(std::abs(std::expm1(*recs[0].t2_log - *recs[0].t3_log)) <= tol);
        }
    }
}

TEST_CASE("grid shapes") {
    {
        GridSpec spec;
        spec.n_values = {100};
        for (const char* tok : {"1", "2", "50", "100"}) spec.r_rules.push_back(RRule::parse(tok));
        spec.exact_mode = ExactMode::bigint;
        const auto recs = run_grid(spec);
        REQUIRE(recs.size() == 4);
        for (const auto& rec : recs) {
            CHECK(rec.exact_log.has_value());
            CHECK(rec.t2_log.has_value());
            CHECK(rec.errors.empty());
        }
        CHECK(recs[0].r == 1);
        CHECK(recs[3].r == 100);
    }
    {
        // float-mode exact at n beyond the bigint cap
        GridSpec spec;
        spec.n_values = {5000};
        spec.r_rules = {RRule::explicit_r(2), RRule::parse("logn")};
        spec.exact_mode = ExactMode::floating;
        const auto recs = run_grid(spec);
        REQUIRE(recs.size() == 2);
        CHECK(recs[0].exact_log.has_value());
    }
    {
        // float-mode exact at n = 1e6 (the r >= n/2 cells via the one-long-cycle form)
        GridSpec spec;
        spec.n_values = {1000000};
        spec.r_rules = {RRule::explicit_r(2), RRule::parse("n/2"), RRule::parse("n")};
        spec.exact_mode = ExactMode::floating;
        const auto recs = run_grid(spec);
        REQUIRE(recs.size() == 3);
        for (const auto& rec : recs) CHECK(rec.exact_log.has_value());
        CHECK(*recs[2].exact_log == doctest::Approx(-harmonic_number(1000000)).epsilon(1e-12));
    }
    {
        // (n=10, r=10): rel_err_t3 computed; exact = -H_10; t3 closed form
        GridSpec spec;
        spec.n_values = {10};
        spec.r_rules = {RRule::explicit_r(10)};
        const auto recs = run_grid(spec);
        REQUIRE(recs.size() == 1);
        REQUIRE(recs[0].exact_log.has_value());
        REQUIRE(recs[0].rel_err_t3.has_value());
        CHECK(*recs[0].exact_log == doctest::Approx(-harmonic_number(10)).epsilon(1e-13));
        CHECK(*recs[0].t3_log ==
              doctest::Approx(-euler_gamma - std::log(10.0)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(run_grid(GridSpec{}), std::invalid_argument);
}

TEST_CASE("emission") {
    GridSpec spec;
    spec.n_values = {50, 200};
    spec.r_rules = {RRule::explicit_r(2), RRule::parse("sqrtn"), RRule::parse("n")};
    const auto recs = run_grid(spec);

    std::ostringstream csv1, csv2, json;
    emit_csv(recs, csv1);
    emit_csv(recs, csv2);
    emit_json(recs, json);

    SUBCASE("csv header and determinism") {
        CHECK(csv1.str() == csv2.str()); // byte-identical across runs
        std::istringstream in(csv1.str());
        std::string header;
        std::getline(in, header);
        CHECK(header ==
              "n,r,u,regime,exact_log,t1_log,t2_log,t3_log,c1_log,"
              "rel_err_t1,rel_err_t2,rel_err_t3,rel_err_c1");
        std::size_t rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        CHECK(rows == recs.size());
    }

    SUBCASE("csv round-trips reals exactly") {
        std::istringstream in(csv1.str());
        std::string line;
        std::getline(in, line); // header
        std::size_t i = 0;
        while (std::getline(in, line)) {
            // split
            std::vector<std::string> cells;
            std::string cur;
            for (char ch : line) {
                if (ch == ',') { cells.push_back(cur); cur.clear(); }
                else cur.push_back(ch);
            }
            cells.push_back(cur);
            REQUIRE(cells.size() == 13);
            CHECK(std::stoll(cells[0]) == recs[i].n);
            CHECK(std::stoll(cells[1]) == recs[i].r);
            CHECK(std::stod(cells[2]) == recs[i].u);
            CHECK(cells[3] == regime_name(recs[i].regime));
            if (recs[i].exact_log) CHECK(std::stod(cells[4]) == *recs[i].exact_log);
            else CHECK(cells[4].empty());
            if (recs[i].t2_log) CHECK(std::stod(cells[6]) == *recs[i].t2_log);
            ++i;
        }
        CHECK(i == recs.size());
    }

    SUBCASE("json round-trips with identical keys and nulls for absent") {
        const auto parsed = nlohmann::json::parse(json.str());
        REQUIRE(parsed.is_array());
        REQUIRE(parsed.size() == recs.size());
        for (std::size_t i = 0; i < recs.size(); ++i) {
            const auto& o = parsed[i];
            CHECK(o["n"].get<std::int64_t>() == recs[i].n);
            CHECK(o["r"].get<std::int64_t>() == recs[i].r);
            CHECK(o["u"].get<double>() == recs[i].u);
            CHECK(o["regime"].get<std::string>() == regime_name(recs[i].regime));
            if (recs[i].t1_log) CHECK(o["t1_log"].get<double>() == *recs[i].t1_log);
            else CHECK(o["t1_log"].is_null());
            if (recs[i].exact_log) CHECK(o["exact_log"].get<double>() == *recs[i].exact_log);
            if (recs[i].rel_err_t2) CHECK(o["rel_err_t2"].get<double>() == *recs[i].rel_err_t2);
        }
    }

    SUBCASE("file emission and failure modes") {
        const std::string path = "emit_test_out.csv";
        emit(recs, EmitFormat::csv, path);
        std::ifstream in(path);
        REQUIRE(in.good());
        std::stringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == csv1.str());
        in.close();
        std::remove(path.c_str());
        CHECK_THROWS(emit(recs, EmitFormat::csv, "/nonexistent-dir/x/y.csv"));
        CHECK_THROWS_AS(emit({}, EmitFormat::csv, "x.csv"), std::invalid_argument);
    }
}

TEST_CASE("rel_err presence matches exact and precondition availability") {
    GridSpec spec;
    spec.n_values = {600};
    spec.r_rules = {RRule::explicit_r(1), RRule::explicit_r(6), RRule::explicit_r(300)};
    spec.exact_mode = ExactMode::bigint;
    const auto recs = run_grid(spec);
    REQUIRE(recs.size() == 3);
    // r=1: u=600 > 500, t3 absent; c1 absent (r < 2)
    CHECK(!recs[0].t3_log.has_value());
    CHECK(!recs[0].c1_log.has_value());
    CHECK(recs[0].t1_log.has_value()); // 1 <= ceil(log 600) = 7
    // r=6: within small_r range, everything but t3 (u=100 <= 500 so t3 too)
    CHECK(recs[1].t1_log.has_value());
    CHECK(recs[1].t3_log.has_value());
    CHECK(recs[1].c1_log.has_value());
    // r=300: t1 absent (r > ceil log n)
    CHECK(!recs[2].t1_log.has_value());
    for (const auto& rec : recs) {
        CHECK(rec.exact_log.has_value());
        CHECK(rec.rel_err_t2.has_value());
        CHECK(rec.rel_err_t1.has_value() == rec.t1_log.has_value());
        CHECK(rec.rel_err_t3.has_value() == rec.t3_log.has_value());
        CHECK(rec.rel_err_c1.has_value() == rec.c1_log.has_value());
    }
}
