#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sidelink/channel.hpp"
#include "sidelink/errors.hpp"
#include "sidelink/rng.hpp"
#include "sidelink/scenario.hpp"

using namespace sidelink;

namespace {

Scenario two_vehicles() {
    Vector q(2);
    q << 5e6, 5e6;
    return Scenario(2, {{1, 2}}, q, 0.0);
}

} // namespace

TEST_CASE("grid geometry and global subchannel indexing") {
    const ChannelGrid g(16, 3);
    CHECK(g.n_subframes() == 16);
    CHECK(g.n_subchannels() == 3);
    CHECK(g.total_subchannels() == 48);
    CHECK(g.bandwidth_hz() == 1.26e6);
    // global ids run subframe by subframe
    CHECK(g.subframe_of(1) == 1);
    CHECK(g.subframe_of(3) == 1);
    CHECK(g.subframe_of(4) == 2);
    CHECK(g.subframe_of(48) == 16);
    CHECK_THROWS_AS(g.subframe_of(0), ConfigInvalid);
    CHECK_THROWS_AS(g.subframe_of(49), ConfigInvalid);
}

TEST_CASE("grid rejects layouts wider than the band") {
    // 7 x 1.26 MHz = 8.82 MHz fits, 8 x 1.26 MHz = 10.08 MHz does not
    CHECK_NOTHROW(ChannelGrid(1, 7));
    CHECK_THROWS_AS(ChannelGrid(1, 8), ConfigInvalid);
    CHECK_THROWS_AS(ChannelGrid(0, 3), ConfigInvalid);
    CHECK_THROWS_AS(ChannelGrid(3, 0), ConfigInvalid);
    CHECK_THROWS_AS(ChannelGrid(3, 3, -1.0), ConfigInvalid);
}

TEST_CASE("capacity_of matches the log-law") {
    // unit SINR doubles nothing: B * log2(1 + 1) = B
    CHECK(capacity_of(1.0, 1.26e6) == doctest::Approx(1.26e6));
    // SINR 3 gives two bits per symbol
    CHECK(capacity_of(3.0, 1.26e6) == doctest::Approx(2.52e6));
    CHECK(capacity_of(0.0, 1.26e6) == 0.0);
    CHECK(capacity_of(1.0, 2.0e6) == doctest::Approx(2.0e6));
    CHECK_THROWS_AS(capacity_of(-0.5, 1.26e6), ConfigInvalid);
    CHECK_THROWS_AS(capacity_of(1.0, 0.0), ConfigInvalid);
}

TEST_CASE("mt19937_64 reference stream is the standard one") {
    // the 10000th draw of a default-seeded engine is pinned by the
    // standard; if this fails the platform's engine is nonconforming
    // and no seeded result can be trusted
    std::mt19937_64 engine(5489u);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = engine();
    CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("rng helpers stay inside their ranges") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform_real(-3.0, 5.0);
        CHECK(x >= -3.0);
        CHECK(x < 5.0);
        const auto k = rng.uniform_index(7);
        CHECK(k < 7);
    }
    CHECK_THROWS_AS(rng.uniform_index(0), Error);
}

TEST_CASE("generate_capacities is seed-deterministic") {
    const ChannelGrid g(4, 3);
    const Scenario s = two_vehicles();
    ChannelModelParams p;
    p.sinr_min_db = 0.0;
    p.sinr_max_db = 20.0;
    p.seed = 42;
    const CapacityMap a = generate_capacities(s, g, p);
    const CapacityMap b = generate_capacities(s, g, p);
    CHECK(a.rates == b.rates);
    CHECK(a.grid == g);
    CHECK(a.rates.rows() == 2);
    CHECK(a.rates.cols() == 12);

    p.seed = 43;
    const CapacityMap c = generate_capacities(s, g, p);
    CHECK(a.rates != c.rates);
}

TEST_CASE("generated rates respect the SINR bounds") {
    const ChannelGrid g(4, 3);
    const Scenario s = two_vehicles();
    ChannelModelParams p;
    p.sinr_min_db = 0.0;
    p.sinr_max_db = 20.0;
    p.seed = 9;
    const CapacityMap c = generate_capacities(s, g, p);
    const double lo = capacity_of(1.0, g.bandwidth_hz());          // 0 dB
    const double hi = capacity_of(100.0, g.bandwidth_hz());        // 20 dB
    for (Index i = 0; i < c.rates.rows(); ++i)
        for (Index k = 0; k < c.rates.cols(); ++k) {
            CHECK(c.rates(i, k) >= lo);
            CHECK(c.rates(i, k) <= hi);
        }
}

TEST_CASE("generate_capacities rejects an empty SINR range") {
    const ChannelGrid g(2, 2);
    const Scenario s = two_vehicles();
    ChannelModelParams p;
    p.sinr_min_db = 10.0;
    p.sinr_max_db = 5.0;
    CHECK_THROWS_AS(generate_capacities(s, g, p), ConfigInvalid);
}

TEST_CASE("capacity map construction checks its shape") {
    const ChannelGrid g(2, 2);
    CHECK_THROWS_AS(CapacityMap(g, Matrix::Ones(2, 3)), ShapeMismatch);
    CHECK_THROWS_AS(CapacityMap(g, Matrix::Constant(2, 4, -1.0)),
                    ConfigInvalid);
    CHECK_NOTHROW(CapacityMap(g, Matrix::Ones(2, 4)));
}
