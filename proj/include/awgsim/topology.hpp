#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace awgsim {

/// Dimensions of the coupler/AWG switch.
///
/// N couplers hang off an N x N AWG. Each K x K coupler reserves one port pair
/// for the AWG, so it serves K - 1 nodes. The wavelength budget N_W is spread
/// over F = N_W / N free spectral ranges.
class SwitchConfig {
public:
    SwitchConfig(int awg_ports, int coupler_ports, int fsr_count);

    /// Builds the configuration for a fixed wavelength budget; N = N_W / F.
    static SwitchConfig from_wavelengths(int wavelength_count, int coupler_ports, int fsr_count);

    int awg_ports() const noexcept { return awg_ports_; }
    int coupler_ports() const noexcept { return coupler_ports_; }
    int fsr_count() const noexcept { return fsr_count_; }
    int wavelength_count() const noexcept { return awg_ports_ * fsr_count_; }
    int nodes_per_coupler() const noexcept { return coupler_ports_ - 1; }
    int node_count() const noexcept { return awg_ports_ * (coupler_ports_ - 1); }

    friend bool operator==(const SwitchConfig&, const SwitchConfig&) = default;

private:
    int awg_ports_;
    int coupler_ports_;
    int fsr_count_;
};

/// 1-based wavelength index, as in lambda_1 .. lambda_{N_W}.
struct WavelengthId {
    int index = 1;

    friend auto operator<=>(const WavelengthId&, const WavelengthId&) = default;
};

/// AWG link from input port i to output port j, both 1-based.
struct Link {
    int input_port = 1;
    int output_port = 1;
};

struct WavelengthPartition {
    std::vector<WavelengthId> w1;
    std::vector<WavelengthId> w2;
};

class UnsupportedPartition : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Wavelengths routed from AWG input i to output j, ascending.
///
/// Throws std::out_of_range for ports outside 1..N.
std::vector<WavelengthId> link_wavelengths(const SwitchConfig& config, Link link);

/// Splits the link set into a lower half (w1, ceil(F/2) entries) and an upper
/// half (w2, floor(F/2) entries). Throws UnsupportedPartition when F = 1.
WavelengthPartition partition(const SwitchConfig& config, Link link);

/// True iff L(i,j) and L(j,i) carry the same wavelength set.
bool reciprocity_check(const SwitchConfig& config, int i, int j);

/// Zero-based lookup of every link's wavelength set, precomputed once per
/// configuration. Entry (s, d) lists 0-based wavelength indices ascending;
/// the first `lower_half()` entries form w1.
class RoutingTable {
public:
    explicit RoutingTable(const SwitchConfig& config);

    std::span<const int> wavelengths(int src_coupler, int dst_coupler) const noexcept
    {
        const auto offset = (static_cast<std::size_t>(src_coupler) * awg_ports_ + dst_coupler) * fsr_count_;
        return {table_.data() + offset, static_cast<std::size_t>(fsr_count_)};
    }

    int lower_half() const noexcept { return (fsr_count_ + 1) / 2; }
    int fsr_count() const noexcept { return fsr_count_; }

private:
    int awg_ports_;
    int fsr_count_;
    std::vector<int> table_;
};

} // namespace awgsim
