#include "awgsim/topology.hpp"

#include <string>

namespace awgsim {

SwitchConfig::SwitchConfig(int awg_ports, int coupler_ports, int fsr_count)
    : awg_ports_(awg_ports), coupler_ports_(coupler_ports), fsr_count_(fsr_count)
{
    if (awg_ports < 2)
        throw std::invalid_argument("AWG port count must be at least 2, got " + std::to_string(awg_ports));
    if (coupler_ports < 2)
        throw std::invalid_argument("coupler port count must be at least 2, got " + std::to_string(coupler_ports));
    if (fsr_count < 1)
        throw std::invalid_argument("FSR count must be at least 1, got " + std::to_string(fsr_count));
}

SwitchConfig SwitchConfig::from_wavelengths(int wavelength_count, int coupler_ports, int fsr_count)
{
    if (fsr_count < 1 || wavelength_count % fsr_count != 0)
        throw std::invalid_argument("FSR count " + std::to_string(fsr_count) + " does not divide wavelength count "
                                    + std::to_string(wavelength_count));
    return SwitchConfig(wavelength_count / fsr_count, coupler_ports, fsr_count);
}

namespace {

void check_port(const SwitchConfig& config, int port, const char* what)
{
    if (port < 1 || port > config.awg_ports())
        throw std::out_of_range(std::string(what) + " port " + std::to_string(port) + " outside 1.."
                                + std::to_string(config.awg_ports()));
}

// Nonnegative remainder.
int floor_mod(int a, int n)
{
    const int r = a % n;
    return r < 0 ? r + n : r;
}

} // namespace

std::vector<WavelengthId> link_wavelengths(const SwitchConfig& config, Link link)
{
    check_port(config, link.input_port, "input");
    check_port(config, link.output_port, "output");

    const int n = config.awg_ports();
    const int offset = floor_mod(1 - link.input_port - link.output_port, n);
    std::vector<WavelengthId> out;
    out.reserve(config.fsr_count());
    for (int f = 1; f <= config.fsr_count(); ++f)
        out.push_back(WavelengthId{f * n - offset});
    return out;
}

WavelengthPartition partition(const SwitchConfig& config, Link link)
{
    if (config.fsr_count() < 2)
        throw UnsupportedPartition("wavelength partition needs at least two FSRs");

    auto all = link_wavelengths(config, link);
    const auto split = static_cast<std::ptrdiff_t>((all.size() + 1) / 2);
    WavelengthPartition p;
    p.w1.assign(all.begin(), all.begin() + split);
    p.w2.assign(all.begin() + split, all.end());
    return p;
}

bool reciprocity_check(const SwitchConfig& config, int i, int j)
{
    return link_wavelengths(config, {i, j}) == link_wavelengths(config, {j, i});
}

RoutingTable::RoutingTable(const SwitchConfig& config)
    : awg_ports_(config.awg_ports()), fsr_count_(config.fsr_count())
{
    table_.reserve(static_cast<std::size_t>(awg_ports_) * awg_ports_ * fsr_count_);
    for (int s = 1; s <= awg_ports_; ++s) {
        for (int d = 1; d <= awg_ports_; ++d) {
            for (auto w : link_wavelengths(config, {s, d}))
                table_.push_back(w.index - 1);
        }
    }
}

} // namespace awgsim
