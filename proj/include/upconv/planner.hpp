#pragma once

#include "upconv/qpm.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace upconv {

struct PumpSource {
    double center_nm = 980.0;
    double tuning_halfwidth_nm = 1.0;
    double power_w = 0.0255;

    Range tuning_range() const noexcept { return {center_nm - tuning_halfwidth_nm, center_nm + tuning_halfwidth_nm}; }
    void validate() const;
};

struct Channel {
    Range signal_band_nm;
    /// Empty until a pump has been solved for the channel centre.
    std::optional<double> pump_center_nm;
    CrystalSpec crystal;
};

struct ChannelPlan {
    Range target_nm;
    std::vector<Channel> channels;
    Range covered_band_nm;
};

/// Signal span reachable by tuning the pump across its range, plus the
/// single-peak FWHM at the pump centre.
double channel_width(const CrystalSpec& crystal, const PumpSource& pump, Range signal_bracket_nm);

/// ceil(width / per_channel_width), tolerant of rounding in exact tilings.
std::size_t channel_count(Range target_nm, double per_channel_width_nm);

/// Equal-width greedy tiling aligned at the lower target edge. Pump centres are left empty.
ChannelPlan tile_band(Range target_nm, double per_channel_width_nm);

/// tile_band plus a pump solve at each channel's signal centre.
ChannelPlan plan_band(Range target_nm, double per_channel_width_nm, const CrystalSpec& crystal,
                      Range pump_bracket_nm);

struct PlanViolation {
    std::size_t channel = 0;
    std::optional<double> pump_center_nm;
    std::string message;
};

/// Channels whose pump centre is missing or falls outside the pump's tuning range.
std::vector<PlanViolation> validate_plan(const ChannelPlan& plan, const PumpSource& pump);

}  // namespace upconv
