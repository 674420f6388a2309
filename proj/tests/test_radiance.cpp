#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "hrc/radiance.hpp"

using namespace hrc;

namespace {

RadianceInterval random_interval(std::mt19937& rng) {
    std::uniform_real_distribution<float> rad(0.0f, 10.0f);
    std::uniform_real_distribution<float> tr(0.0f, 1.0f);
    return {{rad(rng), rad(rng), rad(rng)}, {tr(rng), tr(rng), tr(rng)}};
}

bool close(const Spectrum& a, const Spectrum& b, float rel) {
    auto ch = [rel](float x, float y) {
        return std::abs(x - y) <= rel * std::max({1.0f, std::abs(x), std::abs(y)});
    };
    return ch(a.r, b.r) && ch(a.g, b.g) && ch(a.b, b.b);
}

} // namespace

TEST_CASE("merge reproduces the two-block worked example") {
    const RadianceInterval block{Spectrum::splat(2.0f), Spectrum::splat(0.5f)};
    const RadianceInterval both = merge(block, block);
    CHECK(both.radiance == Spectrum::splat(3.0f));
    CHECK(both.transmittance == Spectrum::splat(0.25f));
}

TEST_CASE("merge identities") {
    std::mt19937 rng(7);
    const RadianceInterval id = RadianceInterval::identity();
    for (int i = 0; i < 100; ++i) {
        const RadianceInterval x = random_interval(rng);
        CHECK(merge(id, x) == x);
        CHECK(merge(x, id) == x);
    }
}

TEST_CASE("opaque near segment blocks everything") {
    const RadianceInterval opaque{Spectrum::splat(5.0f), Spectrum::zero()};
    std::mt19937 rng(8);
    for (int i = 0; i < 20; ++i) {
        const RadianceInterval far = random_interval(rng);
        const RadianceInterval m = merge(opaque, far);
        CHECK(m.radiance == opaque.radiance);
        CHECK(m.transmittance == Spectrum::zero());
    }
}

TEST_CASE("merge is associative within float tolerance") {
    std::mt19937 rng(42);
    for (int i = 0; i < 500; ++i) {
        const RadianceInterval a = random_interval(rng);
        const RadianceInterval b = random_interval(rng);
        const RadianceInterval c = random_interval(rng);
        const RadianceInterval lhs = merge(a, merge(b, c));
        const RadianceInterval rhs = merge(merge(a, b), c);
        CHECK(close(lhs.radiance, rhs.radiance, 1e-5f));
        CHECK(close(lhs.transmittance, rhs.transmittance, 1e-5f));
    }
}

TEST_CASE("transmittance never increases under merge") {
    std::mt19937 rng(43);
    for (int i = 0; i < 200; ++i) {
        const RadianceInterval a = random_interval(rng);
        const RadianceInterval b = random_interval(rng);
        const RadianceInterval m = merge(a, b);
        CHECK(m.transmittance.r <= std::min(a.transmittance.r, b.transmittance.r));
        CHECK(m.transmittance.g <= std::min(a.transmittance.g, b.transmittance.g));
        CHECK(m.transmittance.b <= std::min(a.transmittance.b, b.transmittance.b));
    }
}

TEST_CASE("merge_radiance agrees with the radiance of merge") {
    std::mt19937 rng(44);
    std::uniform_real_distribution<float> rad(0.0f, 10.0f);
    for (int i = 0; i < 200; ++i) {
        const RadianceInterval a = random_interval(rng);
        const Spectrum r{rad(rng), rad(rng), rad(rng)};
        const RadianceInterval far{r, {rad(rng) / 10.0f, rad(rng) / 10.0f, rad(rng) / 10.0f}};
        CHECK(merge_radiance(a, r) == merge(a, far).radiance);
    }
    CHECK(merge_radiance({Spectrum::splat(2.0f), Spectrum::splat(0.5f)}, Spectrum::splat(2.0f)) ==
          Spectrum::splat(3.0f));
    CHECK(merge_radiance({Spectrum::splat(5.0f), Spectrum::zero()}, Spectrum::splat(100.0f)) ==
          Spectrum::splat(5.0f));
}

TEST_CASE("scale_arc premultiplies radiance only") {
    const double quarter = std::numbers::pi / 4.0;
    const AngularFluence f = scale_arc(quarter, {Spectrum::splat(1.0f), Spectrum::splat(0.5f)});
    CHECK(f.value.r == doctest::Approx(quarter));
    CHECK(f.transmittance == Spectrum::splat(0.5f));

    const AngularFluence vac = scale_arc(1.3, RadianceInterval::identity());
    CHECK(vac.value == Spectrum::zero());
    CHECK(vac.transmittance == Spectrum::one());

    const AngularFluence big =
        scale_arc(2.0 * std::numbers::pi, {Spectrum::splat(3.0f), Spectrum::splat(0.25f)});
    CHECK(big.value.g == doctest::Approx(6.0 * std::numbers::pi));
    CHECK(big.transmittance == Spectrum::splat(0.25f));
}
