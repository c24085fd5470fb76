#include "upconv/planner.hpp"

#include "upconv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace upconv {

void PumpSource::validate() const {
    if (!(tuning_halfwidth_nm >= 0.0)) throw DomainError("pump tuning half-width must be >= 0");
    if (!(power_w > 0.0)) throw DomainError("pump power must be > 0");
}

double channel_width(const CrystalSpec& crystal, const PumpSource& pump, Range signal_bracket_nm) {
    pump.validate();
    const double peak = single_peak_fwhm(pump.center_nm, crystal, signal_bracket_nm);
    if (pump.tuning_halfwidth_nm == 0.0) return peak;
    const auto range = pump.tuning_range();
    const double s_hi = solve_signal(range.hi, crystal, signal_bracket_nm);
    const double s_lo = solve_signal(range.lo, crystal, signal_bracket_nm);
    return std::abs(s_hi - s_lo) + peak;
}

std::size_t channel_count(Range target_nm, double per_channel_width_nm) {
    if (!(per_channel_width_nm > 0.0)) throw DomainError("per-channel width must be > 0");
    if (!(target_nm.hi > target_nm.lo)) throw DomainError("target band must be non-empty");
    const double ratio = target_nm.width() / per_channel_width_nm;
    const auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
    return std::max<std::size_t>(n, 1);
}

ChannelPlan tile_band(Range target_nm, double per_channel_width_nm) {
    const std::size_t n = channel_count(target_nm, per_channel_width_nm);
    ChannelPlan plan;
    plan.target_nm = target_nm;
    plan.channels.reserve(n);
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i <= n; ++i) edges[i] = target_nm.lo + static_cast<double>(i) * per_channel_width_nm;
    // Snap the last edge so exact tilings end on the target edge despite rounding.
    if (std::abs(edges[n] - target_nm.hi) <= 1e-9 * per_channel_width_nm) edges[n] = target_nm.hi;
    for (std::size_t i = 0; i < n; ++i) {
        Channel ch;
        ch.signal_band_nm = {edges[i], edges[i + 1]};
        plan.channels.push_back(ch);
    }
    plan.covered_band_nm = {edges.front(), edges.back()};
    return plan;
}

ChannelPlan plan_band(Range target_nm, double per_channel_width_nm, const CrystalSpec& crystal,
                      Range pump_bracket_nm) {
    ChannelPlan plan = tile_band(target_nm, per_channel_width_nm);
    for (std::size_t i = 0; i < plan.channels.size(); ++i) {
        auto& ch = plan.channels[i];
        ch.crystal = crystal;
        const double centre = 0.5 * (ch.signal_band_nm.lo + ch.signal_band_nm.hi);
        try {
            ch.pump_center_nm = solve_pump(centre, crystal, pump_bracket_nm);
        } catch (const SolverError& e) {
            std::ostringstream os;
            os << "channel " << i << " (signal centre " << centre << " nm): " << e.what();
            throw SolverError(e.kind(), os.str(), e.sub_brackets());
        } catch (const DomainError& e) {
            std::ostringstream os;
            os << "channel " << i << " (signal centre " << centre << " nm): " << e.what();
            throw DomainError(os.str());
        }
    }
    return plan;
}

std::vector<PlanViolation> validate_plan(const ChannelPlan& plan, const PumpSource& pump) {
    std::vector<PlanViolation> out;
    const auto range = pump.tuning_range();
    for (std::size_t i = 0; i < plan.channels.size(); ++i) {
        const auto& p = plan.channels[i].pump_center_nm;
        if (!p) {
            out.push_back({i, p, "channel " + std::to_string(i) + " has no solved pump centre"});
            continue;
        }
        if (range.contains(*p)) continue;
        std::ostringstream os;
        os << "channel " << i << " needs pump " << *p << " nm outside tuning range [" << range.lo << ", "
           << range.hi << "] nm";
        out.push_back({i, p, os.str()});
    }
    return out;
}

}  // namespace upconv
