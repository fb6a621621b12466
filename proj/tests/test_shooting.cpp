// Shooting for the self-similar lens profile: outcomes, energy first
// integral, the height H, and barrier curves.
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "lensflow/shooting.hpp"

using namespace lensflow;

namespace {

double energy_deviation(const SelfSimilarProfile& prof) {
    double dev = 0.0;
    for (const auto& s : prof.samples)
        dev = std::max(dev, std::abs(energy_u(s[0], s[1], s[2]) - prof.energy));
    return dev;
}

}  // namespace

TEST_CASE("energy_u closed forms", "[shooting]") {
    CHECK(std::abs(energy_u(0.0, 0.7, 0.0) - 0.7 * std::exp(-0.5 * 0.7 * 0.7)) < 1e-16);
    const double b = 1.19;
    CHECK(std::abs(energy_u(b, 0.0, -sqrt3) - 0.5 * sqrt3 * b * std::exp(-0.5 * b * b)) < 1e-15);
    // unit-circle points all carry e^{-1/2}
    for (double x : {0.1, 0.5, 0.9}) {
        const double u = std::sqrt(1.0 - x * x);
        CHECK(std::abs(energy_u(x, u, -x / u) - std::exp(-0.5)) < 1e-14);
    }
}

TEST_CASE("h = 1 profile lies on the unit circle", "[shooting]") {
    const auto prof = integrate_profile(1.0, 1e-4);
    double worst = 0.0;
    for (const auto& s : prof.samples)
        worst = std::max(worst, std::abs(s[0] * s[0] + s[1] * s[1] - 1.0));
    CHECK(worst <= 1e-8);
}

TEST_CASE("shallow heights undershoot below the barrier", "[shooting]") {
    const auto prof = integrate_profile(0.3, 1e-4);
    CHECK(prof.outcome == ShotOutcome::undershoot);
    CHECK(prof.contact_x > 0.0);
    CHECK(std::abs(prof.contact_slope) < sqrt3);
    const auto bb = barrier_bounds(0.3);
    for (const auto& s : prof.samples) {
        if (s[0] <= 0.0 || s[1] <= 0.0) continue;
        const double quartic = bb.quartic_bound(s[0]);
        CHECK(s[1] < quartic + 1e-12);
        CHECK(s[1] <= 0.3 - 0.5 * 0.3 * s[0] * s[0] + 1e-12);
    }
}

TEST_CASE("energy is a first integral of every shot", "[shooting]") {
    for (double h : {0.3, 0.58, 0.75, 0.95}) {
        const auto prof = integrate_profile(h, 1e-4);
        CHECK(energy_deviation(prof) <= 1e-9);
    }
    // fourth-order convergence of the deviation; steps chosen coarse enough
    // that truncation dominates rounding
    const double e_coarse = energy_deviation(integrate_profile(0.58, 8e-3));
    const double e_fine = energy_deviation(integrate_profile(0.58, 2e-3));
    CHECK(e_coarse < 1e-7);
    CHECK(e_fine < e_coarse / 50.0);
}

TEST_CASE("profiles are concave where positive", "[shooting]") {
    for (double h : {0.3, 0.58, 0.75}) {
        const auto prof = integrate_profile(h, 1e-4);
        for (const auto& s : prof.samples) {
            if (s[1] <= 0.0) continue;
            CHECK((1.0 + s[2] * s[2]) * (s[0] * s[2] - s[1]) < 0.0);
        }
    }
}

TEST_CASE("contact slope is monotone in the height", "[shooting]") {
    double prev = 1.0;
    for (int i = 0; i < 12; ++i) {
        const double h = 0.50 + 0.01 * i;
        const auto prof = integrate_profile(h, 2e-4);
        REQUIRE(prof.outcome == ShotOutcome::undershoot);
        CHECK(prof.contact_slope < prev);
        prev = prof.contact_slope;
    }
    CHECK(integrate_profile(0.62, 2e-4).outcome == ShotOutcome::overshoot);
    CHECK(integrate_profile(0.95, 2e-4).outcome == ShotOutcome::overshoot);
}

TEST_CASE("find_symmetric_lens pins H with a 60-degree contact", "[shooting]") {
    const auto lens = find_symmetric_lens(1e-10);
    CHECK(lens.H > 0.5869);
    CHECK(lens.H < 1.0);
    CHECK(std::abs(lens.profile.contact_slope + sqrt3) < 1e-10);
    // energy relation between apex and contact values
    const double lhs = lens.H * std::exp(-0.5 * lens.H * lens.H);
    const double rhs = 0.5 * sqrt3 * lens.b * std::exp(-0.5 * lens.b * lens.b);
    CHECK(std::abs(lhs - rhs) < 1e-8);
    CHECK(energy_deviation(lens.profile) <= 1e-9);
    // independent desk values for the height and contact abscissa
    CHECK(std::abs(lens.H - 0.6116376896) < 1e-7);
    CHECK(std::abs(lens.b - 1.1920709258) < 1e-6);
    CHECK(lens.profile.outcome == ShotOutcome::hit);
}

TEST_CASE("quartic barrier root is height-independent", "[shooting]") {
    const double B1 = std::sqrt(-6.0 + 2.0 * std::sqrt(15.0));
    for (double h : {0.2, 0.5587, 0.9}) {
        const auto bb = barrier_bounds(h);
        CHECK(std::abs(bb.B1 - B1) < 1e-15);
        CHECK(std::abs(bb.quartic_root - B1) < 1e-12);
        CHECK(std::abs(bb.quartic_bound(bb.quartic_root)) < 1e-12);
    }
    // refined degree-10 bound sharpens the contact abscissa below 1.2568
    const auto bb = barrier_bounds(0.5587);
    CHECK(bb.refined_root < 1.2568);
    CHECK(bb.refined_root > 1.2);
}

TEST_CASE("reference samples span the mirrored contact interval", "[shooting]") {
    const auto lens = find_symmetric_lens(1e-10);
    const auto ref = selfsim_reference(lens.profile);
    REQUIRE(ref.size() >= 4);
    CHECK(ref.front()[0] == -lens.b);
    CHECK(ref.back()[0] == lens.b);
    CHECK(ref.front()[1] == 0.0);
    CHECK(ref.back()[1] == 0.0);
    for (size_t i = 1; i < ref.size(); ++i) CHECK(ref[i][0] > ref[i - 1][0]);
}

TEST_CASE("integrate_profile rejects bad input", "[shooting]") {
    CHECK_THROWS_AS(integrate_profile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_profile(1.5), std::invalid_argument);
    CHECK_THROWS_AS(integrate_profile(0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(find_symmetric_lens(1e-13), std::invalid_argument);
}
