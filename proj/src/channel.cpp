#include "sidelink/channel.hpp"

#include <cmath>
#include <string>

#include "sidelink/errors.hpp"
#include "sidelink/rng.hpp"

namespace sidelink {

ChannelGrid::ChannelGrid(int n_subframes,
                         int n_subchannels,
                         double bandwidth_hz,
                         double subframe_duration_s)
    : n_subframes_(n_subframes),
      n_subchannels_(n_subchannels),
      bandwidth_hz_(bandwidth_hz),
      subframe_duration_s_(subframe_duration_s) {
    if (n_subframes_ < 1)
        throw ConfigInvalid("grid: need at least one subframe");
    if (n_subchannels_ < 1)
        throw ConfigInvalid("grid: need at least one subchannel");
    if (!std::isfinite(bandwidth_hz_) || !std::isfinite(subframe_duration_s_))
        throw NonFiniteInput("grid: bandwidth and duration must be finite");
    if (bandwidth_hz_ <= 0.0)
        throw ConfigInvalid("grid: bandwidth must be positive");
    if (subframe_duration_s_ <= 0.0)
        throw ConfigInvalid("grid: subframe duration must be positive");
    // The subchannels must fit inside the 10 MHz band shared by all
    // transmitters; wider layouts are rejected outright rather than
    // silently clipped.
    if (static_cast<double>(n_subchannels_) * bandwidth_hz_ > kMaxBandHz)
        throw ConfigInvalid("grid: " + std::to_string(n_subchannels_) +
                            " subchannels of " + std::to_string(bandwidth_hz_) +
                            " Hz exceed the 10 MHz band");
}

int ChannelGrid::subframe_of(int k) const {
    if (k < 1 || k > total_subchannels())
        throw ConfigInvalid("subframe_of: subchannel " + std::to_string(k) +
                            " outside 1.." + std::to_string(total_subchannels()));
    return (k - 1) / n_subchannels_ + 1;
}

CapacityMap::CapacityMap(ChannelGrid g, Matrix r)
    : grid(g), rates(std::move(r)) {
    if (rates.cols() != grid.total_subchannels())
        throw ShapeMismatch("capacity map: expected " +
                            std::to_string(grid.total_subchannels()) +
                            " columns, got " + std::to_string(rates.cols()));
    for (Index i = 0; i < rates.rows(); ++i) {
        for (Index k = 0; k < rates.cols(); ++k) {
            const double c = rates(i, k);
            if (!std::isfinite(c))
                throw NonFiniteInput("capacity map: entry (" +
                                     std::to_string(i) + "," +
                                     std::to_string(k) + ") is not finite");
            if (c < 0.0)
                throw ConfigInvalid("capacity map: entry (" +
                                    std::to_string(i) + "," +
                                    std::to_string(k) + ") is negative");
        }
    }
}

double capacity_of(double sinr_linear, double bandwidth_hz) {
    if (!std::isfinite(bandwidth_hz) || !std::isfinite(sinr_linear))
        throw NonFiniteInput("capacity_of: inputs must be finite");
    if (bandwidth_hz <= 0.0)
        throw ConfigInvalid("capacity_of: bandwidth must be positive");
    if (sinr_linear < 0.0)
        throw ConfigInvalid("capacity_of: SINR must be non-negative");
    return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

CapacityMap generate_capacities(const Scenario& scenario,
                                const ChannelGrid& grid,
                                const ChannelModelParams& params) {
    if (!std::isfinite(params.sinr_min_db) || !std::isfinite(params.sinr_max_db))
        throw NonFiniteInput("generate_capacities: SINR bounds must be finite");
    if (params.sinr_min_db > params.sinr_max_db)
        throw ConfigInvalid("generate_capacities: SINR range is empty");

    const int n = scenario.n_vehicles();
    const int total = grid.total_subchannels();
    Matrix rates(n, total);
    Rng rng(params.seed);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < total; ++k) {
            const double sinr_db =
                rng.uniform_real(params.sinr_min_db, params.sinr_max_db);
            const double sinr_linear = std::pow(10.0, sinr_db / 10.0);
            rates(i, k) = capacity_of(sinr_linear, grid.bandwidth_hz());
        }
    }
    return CapacityMap(grid, std::move(rates));
}

} // namespace sidelink
