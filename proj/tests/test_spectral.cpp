#include <doctest.h>

#include <cmath>

#include "gspi/error.hpp"
#include "gspi/spectral.hpp"
#include "util.hpp"

using namespace gspi;

namespace {

// largest-magnitude entry positive, lowest index on ties
bool sign_normalized(const Eigen::VectorXd& u)
{
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < u.size(); ++i)
        if (std::abs(u(i)) > std::abs(u(best)) + 1e-12)
            best = i;
    return u(best) > 0.0;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("two-node graph")
{
    const auto b = eigendecompose(WeightedGraph(2, 0.5, {{0, 1, 2.0}}));
    CHECK(b.eigenvalues(0) == 0.0);
    CHECK(b.eigenvalues(1) == doctest::Approx(0.5));
    CHECK(b.eigenvectors(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b.eigenvectors(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("path P3 eigenvalues")
{
    // det(L - x I) = -x (x - 1)(x - 3) for unit weights
    const auto b = eigendecompose(testutil::path_graph(3));
    CHECK(b.eigenvalues(0) == 0.0);
    CHECK(b.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(b.eigenvalues(2) == doctest::Approx(3.0));
    // u_1 = (1, 0, -1)/sqrt(2), u_2 = (1, -2, 1)/sqrt(6), sign-normalized
    CHECK(b.eigenvectors(0, 1) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(b.eigenvectors(1, 1)) < 1e-12);
    CHECK(b.eigenvectors(1, 2) == doctest::Approx(2 / std::sqrt(6.0)));
}

TEST_CASE("basis invariants on random graphs")
{
    Rng rng(17);
    for (int k = 0; k < 30; ++k) {
        const int n = 2 + static_cast<int>(rng.below(40));
        const auto g = testutil::random_connected(rng, n, 0.15, 0.1 + 0.9 * rng.uniform());
        const auto l = laplacian(g);
        const auto b = eigendecompose(l);
        REQUIRE(b.size() == n);
        CHECK(b.eigenvalues(0) == 0.0);
        for (int i = 1; i < n; ++i)
            CHECK(b.eigenvalues(i) >= b.eigenvalues(i - 1));
        const double lmax = std::max(1.0, b.lambda_max());
        for (int i = 0; i < n; ++i) {
            CHECK((l * b.eigenvectors.col(i) - b.eigenvalues(i) * b.eigenvectors.col(i)).norm() <= 1e-6 * lmax);
            CHECK(sign_normalized(b.eigenvectors.col(i)));
        }
        const Eigen::MatrixXd gram = b.eigenvectors.transpose() * b.eigenvectors;
        CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
        for (int i = 0; i < n; ++i)
            CHECK(b.eigenvectors(i, 0) == doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-6));
    }
}

TEST_CASE("gft")
{
    Rng rng(4);
    const auto g = testutil::random_connected(rng, 20, 0.2);
    const auto b = eigendecompose(g);

    SUBCASE("constant signal")
    {
        const std::vector<double> s(20, 1000.0);
        const auto hat = gft(b, s);
        CHECK(hat[0] == doctest::Approx(1000.0 * std::sqrt(20.0)));
        for (int l = 1; l < 20; ++l)
            CHECK(std::abs(hat[l]) <= 1e-6 * 1000.0);
    }
    SUBCASE("last eigenvector")
    {
        std::vector<double> s(20);
        for (int i = 0; i < 20; ++i)
            s[i] = b.eigenvectors(i, 19);
        const auto hat = gft(b, s);
        for (int l = 0; l < 19; ++l)
            CHECK(std::abs(hat[l]) < 1e-12);
        CHECK(hat[19] == doctest::Approx(1.0));
    }
    SUBCASE("matches direct summation and Parseval, linear")
    {
        const auto p4 = eigendecompose(testutil::path_graph(4));
        std::vector<double> s{1000, -1000, -1000, 1000};
        const auto hat = gft(p4, s);
        double e_sig = 0, e_hat = 0;
        for (int l = 0; l < 4; ++l) {
            double direct = 0.0;
            for (int i = 0; i < 4; ++i)
                direct += s[i] * p4.eigenvectors(i, l);
            CHECK(hat[l] == doctest::Approx(direct).epsilon(1e-12));
            e_hat += hat[l] * hat[l];
            e_sig += s[l] * s[l];
        }
        CHECK(std::sqrt(e_hat) == doctest::Approx(std::sqrt(e_sig)).epsilon(1e-6));

        std::vector<double> s1(20), s2(20), mix(20);
        for (int i = 0; i < 20; ++i) {
            s1[i] = rng.uniform(-1, 1);
            s2[i] = rng.uniform(-1, 1);
            mix[i] = 2.5 * s1[i] - 0.75 * s2[i];
        }
        const auto h1 = gft(b, s1), h2 = gft(b, s2), hm = gft(b, mix);
        for (int l = 0; l < 20; ++l)
            CHECK(hm[l] == doctest::Approx(2.5 * h1[l] - 0.75 * h2[l]).epsilon(1e-9));
    }
    SUBCASE("length mismatch")
    {
        CHECK_THROWS_AS(gft(b, std::vector<double>(3, 1.0)), ValidationError);
    }
}

TEST_CASE("spectrum slice")
{
    std::vector<double> spec(1000);
    for (int i = 0; i < 1000; ++i)
        spec[i] = i;
    CHECK(spectrum_slice(spec, std::vector<int>{1, 2, 3}) == std::vector<double>{1, 2, 3});
    CHECK(spectrum_slice(spec, std::vector<int>{997, 998, 999}) == std::vector<double>{997, 998, 999});
    CHECK(spectrum_slice(spec, std::vector<int>{}).empty());
    CHECK_THROWS_AS(spectrum_slice(spec, std::vector<int>{1000}), ValidationError);
    CHECK_THROWS_AS(spectrum_slice(spec, std::vector<int>{-1}), ValidationError);
}

TEST_CASE("cache round trip")
{
    testutil::TempDir dir("cache");
    Rng rng(2);
    const auto g = testutil::random_connected(rng, 25, 0.2);
    SpectralCache cache(dir.path);
    CHECK_FALSE(cache.load(g).has_value());
    const auto b = cache.load_or_compute(g);
    const auto again = cache.load(g);
    REQUIRE(again.has_value());
    CHECK(again->eigenvalues == b.eigenvalues);
    CHECK(again->eigenvectors == b.eigenvectors);
}

}  // TEST_SUITE
