#include <doctest.h>

#include <cmath>

#include "rrbeam/array_model.hpp"
#include "support/test_support.hpp"

using namespace rrbeam;
using namespace rrbeam::testing;

namespace {

// R_{i+n} built from first principles, inverted with a dense pivoted solve.
double dense_optimal_sinr_db(const ScenarioConfig& c) {
    const int m = c.geometry.num_sensors;
    CMatrix rin = CMatrix::Identity(m, m);
    CVector as;
    double soi_power = 0.0;
    for (const auto& s : c.sources) {
        const CVector a = ula(m, c.geometry.spacing_ratio, s.doa_degrees);
        if (s.is_soi) {
            as = a;
            soi_power = std::pow(10.0, s.power_db / 10.0);
        } else {
            rin += std::pow(10.0, (c.snr_db + s.power_db) / 10.0) * a * a.adjoint();
        }
    }
    const CVector sol = rin.fullPivLu().solve(as);
    return 10.0 * std::log10(soi_power * as.dot(sol).real());
}

}  // namespace

TEST_SUITE("array_model") {

TEST_CASE("steering vector at broadside is all ones") {
    const CVector a = steering_vector({4, 0.5}, 90.0);
    CHECK((a - CVector::Ones(4)).norm() < 1e-12);
}

TEST_CASE("steering vector along the axis alternates sign") {
    const CVector a = steering_vector({4, 0.5}, 1e-9);
    CVector expected(4);
    expected << 1.0, -1.0, 1.0, -1.0;
    CHECK((a - expected).norm() < 1e-9);
}

TEST_CASE("steering vector at 60 degrees, two sensors") {
    const CVector a = steering_vector({2, 0.5}, 60.0);
    CHECK(std::abs(a(0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(a(1) - Complex(0.0, -1.0)) < 1e-12);
}

TEST_CASE("steering vector entries are unit modulus and start at one") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> doa(0.5, 179.5);
    std::uniform_real_distribution<double> ratio(0.1, 2.0);
    for (int t = 0; t < 200; ++t) {
        const ArrayGeometry g{2 + t % 30, ratio(rng)};
        const double th = doa(rng);
        const CVector a = steering_vector(g, th);
        CHECK(std::abs(a(0) - Complex(1.0, 0.0)) < 1e-15);
        CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
        CHECK((a - ula(g.num_sensors, g.spacing_ratio, th)).norm() < 1e-9);
    }
}

TEST_CASE("noise-free broadside source with unit symbol gives all ones") {
    ScenarioConfig c = make_scenario(6, 0.0, false);
    SnapshotSource src(c, 0.0);
    const Snapshot x = src.compose(CVector::Ones(1), CVector::Zero(6));
    CHECK((x.data - CVector::Ones(6)).norm() < 1e-12);
}

TEST_CASE("pure noise has identity sample covariance") {
    ScenarioConfig c = make_scenario(4, -400.0, false);
    SnapshotSource src(c);
    Rng rng(5);
    constexpr int n = 100000;
    CMatrix acc = CMatrix::Zero(4, 4);
    for (int i = 0; i < n; ++i) {
        const CVector x = src.next(rng).data;
        acc += x * x.adjoint();
    }
    acc /= n;
    CHECK((acc - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("sample covariance of the four-source scenario matches the analytic one") {
    const ScenarioConfig c = load_scenario("table1_m64_nomismatch");
    SnapshotSource src(c);
    Rng rng(17);
    constexpr int n = 100000;
    constexpr int block = 2000;
    CMatrix acc = CMatrix::Zero(64, 64);
    CMatrix xs(64, block);
    for (int b = 0; b < n / block; ++b) {
        for (int i = 0; i < block; ++i) xs.col(i) = src.next(rng).data;
        acc.noalias() += xs * xs.adjoint();
    }
    acc /= n;
    const CMatrix r = soi_covariance(c) + interference_noise_covariance(c);
    CHECK(rel_fro(acc, r) < 0.05);
}

TEST_CASE("generate_snapshot draws from the configured model") {
    ScenarioConfig c = make_scenario(8, 10.0, true);
    Rng a(3), b(3);
    const Snapshot x = generate_snapshot(c, a);
    const Snapshot y = SnapshotSource(c).next(b);
    CHECK(x.data.size() == 8);
    CHECK(x.data.allFinite());
    CHECK(x.data == y.data);
}

TEST_CASE("fresh tracker holds delta times identity") {
    CovarianceTracker t(5, 0.998, 3.0);
    CHECK((t.r_inv() - 3.0 * CMatrix::Identity(5, 5)).norm() < 1e-15);
    CHECK((t.r_hat() - CMatrix::Identity(5, 5) / 3.0).norm() < 1e-15);
    CHECK(t.count() == 0);
}

TEST_CASE("tracked inverse equals the direct inverse, M=2, delta=100") {
    std::mt19937_64 rng(21);
    CovarianceTracker t(2, 1.0, 100.0);
    CMatrix direct = CMatrix::Identity(2, 2) / 100.0;
    for (int i = 0; i < 50; ++i) {
        const CVector x = random_vector(rng, 2);
        t.update(x);
        direct += x * x.adjoint();
    }
    CHECK(rel_fro(t.r_inv(), direct.inverse()) < 1e-8);
    CHECK(t.count() == 50);
}

TEST_CASE("rank-one update along e1 only touches entry (0,0)") {
    CovarianceTracker t(3, 0.9, 2.0);
    t.update(CVector(CVector::Unit(3, 0)));
    CMatrix diff = t.r_inv() - 2.0 * CMatrix::Identity(3, 3);
    const double corner = std::abs(diff(0, 0));
    diff(0, 0) = 0.0;
    // alpha < 1 rescales the untouched diagonal by 1/alpha.
    CMatrix expected = CMatrix::Zero(3, 3);
    expected(1, 1) = expected(2, 2) = 2.0 / 0.9 - 2.0;
    CHECK((diff - expected).norm() < 1e-12);
    CHECK(corner > 0.0);

    CovarianceTracker u(3, 1.0, 2.0);
    u.update(CVector(CVector::Unit(3, 0)));
    CMatrix d1 = u.r_inv() - 2.0 * CMatrix::Identity(3, 3);
    CHECK(std::abs(d1(0, 0)) > 0.0);
    d1(0, 0) = 0.0;
    CHECK(d1.norm() < 1e-15);
}

TEST_CASE("tracked inverse times direct matrix is identity for small arrays") {
    std::mt19937_64 rng(23);
    for (int m = 1; m <= 8; ++m) {
        const double delta = 0.5 + m;
        CovarianceTracker t(m, 1.0, delta);
        CMatrix direct = CMatrix::Identity(m, m) / delta;
        for (int i = 1; i <= 100; ++i) {
            const CVector x = random_vector(rng, m, 1.0 + (i % 7));
            t.update(x);
            direct += x * x.adjoint();
            REQUIRE((t.r_inv() * direct - CMatrix::Identity(m, m)).norm() < 1e-6);
        }
    }
}

TEST_CASE("tracker matrices stay Hermitian and the inverse stays positive definite") {
    std::mt19937_64 rng(29);
    CovarianceTracker t(6, 0.95, 10.0);
    for (int i = 0; i < 300; ++i) {
        t.update(random_vector(rng, 6, 3.0));
        REQUIRE((t.r_hat() - t.r_hat().adjoint()).norm() < 1e-12);
        REQUIRE((t.r_inv() - t.r_inv().adjoint()).norm() < 1e-8);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(t.r_inv());
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // with forgetting the tracked inverse still matches the weighted sample covariance
    CHECK((t.r_inv() * t.r_hat() - CMatrix::Identity(6, 6)).norm() < 1e-6);
}

TEST_CASE("white-noise SINR gains the array size") {
    ScenarioConfig c = make_scenario(16, 10.0, false);
    const CVector w = steering_vector(c.geometry, 90.0) / 16.0;
    CHECK(output_sinr(w, c) == doctest::Approx(10.0 + 10.0 * std::log10(16.0)).epsilon(1e-12));
}

TEST_CASE("weights orthogonal to the SoI hit the floor") {
    ScenarioConfig c = make_scenario(4, 10.0, false);
    CVector w(4);
    w << 1.0, -1.0, 0.0, 0.0;
    CHECK(output_sinr(w, c) == kSinrFloorDb);
}

TEST_CASE("zero disturbance power is reported as an error") {
    ScenarioConfig c = make_scenario(4, 10.0, false);
    CHECK_THROWS_AS(output_sinr(CVector::Zero(4), c), NumericalError);
}

TEST_CASE("noise-only optimum for 64 sensors") {
    ScenarioConfig c = make_scenario(64, 10.0, false);
    CHECK(optimal_sinr(c) == doctest::Approx(10.0 + 10.0 * std::log10(64.0)).epsilon(1e-12));
    CHECK(optimal_sinr(c) == doctest::Approx(28.06).epsilon(1e-3));
}

TEST_CASE("co-aligned strong interferer drives the optimum toward minus infinity") {
    double previous = 1e300;
    for (double inr : {20.0, 60.0, 100.0, 140.0}) {
        ScenarioConfig c = make_scenario(2, 10.0, false);
        c.sources.push_back({90.0, inr, false});
        const double s = optimal_sinr(c);
        CHECK(s < previous);
        previous = s;
    }
    CHECK(previous < -100.0);
}

TEST_CASE("optimum of the four-source scenario matches a dense solve") {
    const ScenarioConfig c = load_scenario("table1_m64");
    const double oracle = dense_optimal_sinr_db(c);
    CHECK(optimal_sinr(c) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(optimal_sinr(c) == doctest::Approx(28.0601804286).epsilon(1e-10));
    SinrEvaluator eval(c);
    CHECK(eval.output_sinr_db(eval.optimal_weights()) ==
          doctest::Approx(eval.optimal_sinr_db()).epsilon(1e-12));
}

TEST_CASE("output SINR ignores complex scaling of the weights") {
    std::mt19937_64 rng(31);
    const ScenarioConfig c = load_scenario("table1_m64");
    SinrEvaluator eval(c);
    for (int t = 0; t < 20; ++t) {
        const CVector w = random_vector(rng, 64);
        const CVector scaled = Complex(0.0, 3.0) * w;
        CHECK(std::abs(eval.output_sinr_db(w) - eval.output_sinr_db(scaled)) < 1e-10);
    }
}

TEST_CASE("no weight vector beats the optimum") {
    std::mt19937_64 rng(37);
    for (const char* name : {"table1_m64", "table1_m64_nomismatch"}) {
        const ScenarioConfig c = load_scenario(name);
        SinrEvaluator eval(c);
        const double opt = eval.optimal_sinr_db();
        const CVector wopt = eval.optimal_weights();
        for (int t = 0; t < 100; ++t) {
            const CVector w = t % 2 ? random_vector(rng, 64) : CVector(wopt + 0.01 * random_vector(rng, 64));
            CHECK(eval.output_sinr_db(w) <= opt + 1e-9);
        }
    }
}

TEST_CASE("power tracker is a normalized exponential average") {
    PowerTracker p(0.5);
    CHECK(p.value() == 0.0);
    p.update(CVector::Constant(1, 2.0));
    CHECK(p.value() == doctest::Approx(4.0));
    p.update(CVector::Zero(1));
    // weights 0.5 and 1 on samples 4 and 0
    CHECK(p.value() == doctest::Approx(4.0 * 0.5 / 1.5));
}

}  // TEST_SUITE
