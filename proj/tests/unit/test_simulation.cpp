#include <doctest.h>

#include <grasp/error.hpp>
#include <grasp/linalg.hpp>
#include <grasp/simulation.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace grasp;
using namespace grasp::sim;

namespace {

SimScenario toy(std::size_t n = 100)
{
    SimScenario s;
    s.name = "toy";
    s.n = n;
    s.groups = {{2, 1, CoefficientRule::constant(1.0)}, {2, 0, CoefficientRule::none()}};
    return s;
}

const std::vector<std::string> scenario_names{"concentrated", "distributed", "dense", "half"};

std::size_t count_nonzero(const std::vector<double>& v)
{
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

} // namespace

TEST_CASE("two-group covariance")
{
    const Matrix sigma = build_covariance(toy());
    const double expected[4][4] = {
        {1.0, 0.8, 0.2, 0.2},
        {0.8, 1.0, 0.2, 0.2},
        {0.2, 0.2, 1.0, 0.8},
        {0.2, 0.2, 0.8, 1.0},
    };
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(sigma(i, j) == expected[i][j]);
        }
    }

    SimScenario single = toy();
    single.groups = {{3, 1, CoefficientRule::constant(1.0)}};
    const Matrix cs = build_covariance(single);
    CHECK(cs(0, 0) == 1.0);
    CHECK(cs(0, 2) == 0.8);

    SimScenario bad = toy();
    bad.within_corr = -0.9;
    CHECK_THROWS_AS(build_covariance(bad), FactorizationError);
}

TEST_CASE("named scenarios")
{
    for (const std::string& name : scenario_names) {
        const SimScenario s = SimScenario::named(name, 0.2);
        CHECK_NOTHROW(s.validate());
        CHECK_NOTHROW(linalg::cholesky(build_covariance(s)));
        CHECK(s.group_index().size() == s.p());
    }
    CHECK(SimScenario::named("concentrated").p() == 50);
    CHECK(SimScenario::named("distributed").p() == 50);
    CHECK(SimScenario::named("dense").p() == 100);
    CHECK(SimScenario::named("half").p() == 80);
    CHECK_THROWS_AS(SimScenario::named("sparse"), UsageError);
}

TEST_CASE("scenario validation")
{
    SimScenario s = toy();
    s.groups[0].active = 3;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = toy();
    s.groups[1].active = 1;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = toy();
    s.snr = 0.0;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = toy();
    s.groups.clear();
    CHECK_THROWS_AS(s.validate(), UsageError);
}

TEST_CASE("noise calibration")
{
    // β = (√10, 0, 0, 0) gives βᵀΣβ = 10.
    const SimScenario base = toy();
    const Matrix sigma = build_covariance(base);
    const std::vector<double> beta{std::sqrt(10.0), 0.0, 0.0, 0.0};
    SimScenario s = base;
    s.snr = 1.0;
    CHECK(calibrate_noise(s, beta, sigma) == doctest::Approx(10.0).epsilon(1e-14));
    s.snr = 5.0;
    CHECK(calibrate_noise(s, beta, sigma) == doctest::Approx(2.0).epsilon(1e-14));
    s.snr = 0.2;
    CHECK(calibrate_noise(s, beta, sigma) == doctest::Approx(50.0).epsilon(1e-14));
    s.noise = NoiseDefinition::amplitude_ratio;
    CHECK(calibrate_noise(s, beta, sigma) == doctest::Approx(250.0).epsilon(1e-14));
    CHECK_THROWS_AS(calibrate_noise(s, std::vector<double>(4, 0.0), sigma), DomainError);
}

TEST_CASE("replicate coefficient patterns")
{
    RngStream rng(1);
    const Replicate c = generate_replicate(rng, SimScenario::named("concentrated"));
    CHECK(count_nonzero(c.truth) == 5);
    std::vector<double> values;
    for (std::size_t g = 0; g < 5; ++g) {
        CHECK(c.truth[10 * g] != 0.0);
        values.push_back(c.truth[10 * g]);
    }
    CHECK(values == std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.0});
    CHECK(c.data.x.rows() == 500);
    CHECK(c.data.y.size() == 500);
    CHECK(c.data.groups[13] == 1);

    const Replicate d = generate_replicate(rng, SimScenario::named("distributed"));
    CHECK(count_nonzero(d.truth) == 10);
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(d.truth[j] == 0.5);
    }

    const SimScenario half_spec = SimScenario::named("half");
    const Replicate h = generate_replicate(rng, half_spec);
    // Group 5 covers columns 55..59 and has no actives.
    for (std::size_t j = 55; j < 60; ++j) {
        CHECK(h.truth[j] == 0.0);
    }
    CHECK(count_nonzero(h.truth) == 22 + 3 + 8 + 4 + 1);
    for (std::size_t j = 60; j < 64; ++j) {
        const double v = h.truth[j];
        CHECK((v == 1.0 || v == 2.0 || v == 3.0 || v == 5.0));
    }

    const Replicate dense = generate_replicate(rng, SimScenario::named("dense"));
    CHECK(count_nonzero(dense.truth) == 27 + 8 + 18 + 4 + 14 + 18);
}

TEST_CASE("replicate noise level")
{
    RngStream rng(2);
    SimScenario s = SimScenario::named("concentrated", 0.2);
    const Matrix sigma = build_covariance(s);
    const Replicate r = generate_replicate(rng, s);
    CHECK(r.sigma2 == doctest::Approx(calibrate_noise(s, r.truth, sigma)).epsilon(1e-14));
    CHECK(r.sigma2 == doctest::Approx(95.0).epsilon(1e-12));
    // Residual variance around the truth.
    const std::vector<double> fitted = linalg::multiply(r.data.x, r.truth);
    double ss = 0.0;
    for (std::size_t i = 0; i < r.data.n(); ++i) {
        ss += (r.data.y[i] - fitted[i]) * (r.data.y[i] - fitted[i]);
    }
    const double var = ss / static_cast<double>(r.data.n());
    CHECK(std::abs(var - 95.0) < 4.0 * 95.0 * std::sqrt(2.0 / 500.0));
}

TEST_CASE("empirical covariance converges")
{
    SimScenario s = toy(100000);
    RngStream rng(3);
    const Replicate r = generate_replicate(rng, s);
    const Matrix sigma = build_covariance(s);
    double frob = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            double c = 0.0;
            for (std::size_t k = 0; k < s.n; ++k) {
                c += r.data.x(k, i) * r.data.x(k, j);
            }
            c /= static_cast<double>(s.n);
            frob += (c - sigma(i, j)) * (c - sigma(i, j));
        }
    }
    CHECK(std::sqrt(frob) < 0.05);
}

TEST_CASE("replicates are reproducible")
{
    RngStream a(4), b(4);
    const Replicate ra = generate_replicate(a, SimScenario::named("half"));
    const Replicate rb = generate_replicate(b, SimScenario::named("half"));
    CHECK(ra.data.x == rb.data.x);
    CHECK(ra.data.y == rb.data.y);
    CHECK(ra.truth == rb.truth);
}

TEST_CASE("evaluate")
{
    const std::vector<double> truth{1.0, 0.0, 0.0, -2.0};
    MseReport r = evaluate(truth, truth);
    CHECK(r.z0 == 0.0);
    CHECK(r.nz0 == 0.0);
    CHECK(r.oa == 0.0);

    r = evaluate(std::vector<double>(4, 0.0), std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(r.z0 == 0.0);
    CHECK(r.nz0 == 1.0);
    CHECK(r.oa == 1.0);

    r = evaluate(std::vector<double>{1.5, 0.1, -0.2, -2.0}, truth);
    CHECK(r.z0 == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(r.nz0 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.oa == r.z0 + r.nz0);

    CHECK_THROWS_AS(evaluate(std::vector<double>{1.0}, truth), DataError);
}

TEST_CASE("estimator names")
{
    for (Estimator e : {Estimator::ols, Estimator::rasp, Estimator::grasp_fixed_a, Estimator::grasp_learned}) {
        CHECK(parse_estimator(estimator_name(e)) == e);
    }
    CHECK(estimator_name(Estimator::grasp_fixed_a) == "grasp-a1n");
    CHECK(parse_estimator_list("ols, rasp,grasp")
          == std::vector<Estimator>{Estimator::ols, Estimator::rasp, Estimator::grasp_learned});
    CHECK_THROWS_AS(parse_estimator("gigg"), UsageError);

    const HyperConfig c = estimator_config(Estimator::grasp_fixed_a, 200, {}, 5);
    CHECK(c.grouped);
    CHECK(c.group_shapes.mode == ShapeMode::fixed_a_learn_b);
    CHECK(c.group_shapes.a == 1.0 / 200.0);
    CHECK(c.local_shapes[0].mode == ShapeMode::learned);
    CHECK_FALSE(estimator_config(Estimator::rasp, 200, {}, 5).grouped);
    CHECK(estimator_config(Estimator::grasp_learned, 200, {}, 5).group_shapes.mode == ShapeMode::learned);
}

TEST_CASE("ols estimate on the original scale")
{
    SimScenario s = toy(400);
    s.snr = 50.0;
    RngStream rng(6);
    Replicate r = generate_replicate(rng, s);
    for (std::size_t i = 0; i < r.data.n(); ++i) {
        r.data.y[i] += 3.0;
        for (std::size_t j = 0; j < 4; ++j) {
            r.data.x(i, j) = 2.0 * r.data.x(i, j) + 1.0;
        }
    }
    // Centering absorbs the intercept; the scale change halves the slopes.
    const std::vector<double> est = fit_estimator(Estimator::ols, r.data, {}, 1);
    const std::vector<double> expected = linalg::least_squares(
        [&] {
            Matrix centered(r.data.n(), 5);
            for (std::size_t i = 0; i < r.data.n(); ++i) {
                centered(i, 0) = 1.0;
                for (std::size_t j = 0; j < 4; ++j) {
                    centered(i, j + 1) = r.data.x(i, j);
                }
            }
            return centered;
        }(),
        r.data.y);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(est[j] == doctest::Approx(expected[j + 1]).epsilon(1e-8));
    }
    CHECK(est[0] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("study smoke run and determinism")
{
    StudyConfig cfg;
    cfg.scenarios = {SimScenario::named("concentrated", 0.2, 2)};
    cfg.estimators = {Estimator::ols};
    cfg.seed = 7;
    const std::vector<StudyRow> a = run_study(cfg);
    REQUIRE(a.size() == 1);
    CHECK(a[0].scenario == "concentrated");
    CHECK(a[0].estimator == "ols");
    CHECK(a[0].replicates == 2);
    CHECK(a[0].failures == 0);
    CHECK(a[0].oa == a[0].z0 + a[0].nz0);
    CHECK(a[0].time_s < 1.0);

    cfg.estimators = {Estimator::ols, Estimator::rasp};
    cfg.schedule = {50, 50, 1};
    const std::vector<StudyRow> b = run_study(cfg);
    const std::vector<StudyRow> c = run_study(cfg);
    REQUIRE(b.size() == 2);
    // OLS is unaffected by adding estimators.
    CHECK(b[0].oa == a[0].oa);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(b[i].z0 == c[i].z0);
        CHECK(b[i].nz0 == c[i].nz0);
        CHECK(b[i].oa == c[i].oa);
    }
    cfg.seed = 8;
    CHECK(run_study(cfg)[1].oa != b[1].oa);

    cfg.estimators.clear();
    CHECK_THROWS_AS(run_study(cfg), UsageError);
}

TEST_CASE("thread count does not change results")
{
    StudyConfig cfg;
    cfg.scenarios = {SimScenario::named("half", 1.0, 3)};
    cfg.estimators = {Estimator::ols, Estimator::grasp_fixed_a};
    cfg.schedule = {30, 30, 1};
    cfg.threads = 1;
    const std::vector<StudyRow> one = run_study(cfg);
    cfg.threads = 3;
    const std::vector<StudyRow> three = run_study(cfg);
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].oa == three[i].oa);
    }
}

TEST_CASE("higher SNR lowers the error")
{
    StudyConfig cfg;
    cfg.estimators = {Estimator::ols, Estimator::rasp, Estimator::grasp_fixed_a, Estimator::grasp_learned};
    cfg.schedule = {200, 200, 1};
    cfg.seed = 9;
    cfg.scenarios = {SimScenario::named("concentrated", 0.2, 20), SimScenario::named("concentrated", 5.0, 20)};
    const std::vector<StudyRow> rows = run_study(cfg);
    REQUIRE(rows.size() == 8);
    for (std::size_t k = 0; k < 4; ++k) {
        INFO("estimator " << rows[k].estimator);
        CHECK(rows[4 + k].oa < rows[k].oa);
    }
}

TEST_CASE("scenario text format")
{
    const SimScenario s = parse_scenario(
        "# custom setting\n"
        "name: custom\n"
        "n: 120\n"
        "snr: 0.5\n"
        "replicates: 3\n"
        "within_corr: 0.6\n"
        "noise: amplitude\n"
        "group: 5 2 0.8   # first\n"
        "group: 4 3 U(1, 2,3)\n"
        "group: 3 0 -\n");
    CHECK(s.name == "custom");
    CHECK(s.n == 120);
    CHECK(s.snr == 0.5);
    CHECK(s.replicates == 3);
    CHECK(s.within_corr == 0.6);
    CHECK(s.across_corr == 0.2);
    CHECK(s.noise == NoiseDefinition::amplitude_ratio);
    REQUIRE(s.groups.size() == 3);
    CHECK(s.groups[0].rule.kind == CoefficientRule::Kind::constant);
    CHECK(s.groups[0].rule.values == std::vector<double>{0.8});
    CHECK(s.groups[1].rule.values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(s.groups[1].rule.to_string() == "U(1,2,3)");
    CHECK(s.groups[2].rule.kind == CoefficientRule::Kind::none);

    const SimScenario based = parse_scenario("base: half\nsnr: 5\n");
    CHECK(based.name == "half");
    CHECK(based.p() == 80);
    CHECK(based.snr == 5.0);

    CHECK_THROWS_AS(parse_scenario("n 100\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("colour: red\ngroup: 2 1 1\nn: 10\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("n: ten\ngroup: 2 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("n: 10\ngroup: 2 1 U(1,x)\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("n: 10\ngroup: 2 3 1\n"), UsageError);
}

TEST_CASE("scenario files")
{
    const auto path = std::filesystem::temp_directory_path() / "grasp_test_scenario.txt";
    {
        std::ofstream out(path);
        out << "base: concentrated\nreplicates: 4\n";
    }
    const SimScenario s = read_scenario_file(path.string());
    CHECK(s.replicates == 4);
    CHECK(s.p() == 50);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_scenario_file(path.string()), DataError);
}
