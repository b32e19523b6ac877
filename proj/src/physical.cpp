#include "awgsim/physical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <set>
#include <string>

namespace awgsim {

namespace {

constexpr int kMaxT = (kRsBlockLength - 1) / 2;

// Suffix sums S[t] = sum_{j>t} j C(255,j) p^j (1-p)^(255-j), in long double
// log space so tiny p does not underflow term by term.
std::array<long double, kRsBlockLength + 1> weighted_tails(double ber)
{
    std::array<long double, kRsBlockLength + 1> tail{};
    if (ber <= 0.0)
        return tail;

    const long double log_q = 8.0L * std::log1p(-static_cast<long double>(ber));  // log(1 - p)
    const long double p = -std::expm1(log_q);
    if (p >= 1.0L) {
        // Every byte is wrong.
        for (int t = 0; t < kRsBlockLength; ++t)
            tail[static_cast<std::size_t>(t)] = kRsBlockLength;
        return tail;
    }
    const long double log_p = std::log(p);

    std::array<long double, kRsBlockLength + 1> log_binom{};
    for (int j = 1; j <= kRsBlockLength; ++j)
        log_binom[static_cast<std::size_t>(j)] = log_binom[static_cast<std::size_t>(j - 1)]
            + std::log(static_cast<long double>(kRsBlockLength - j + 1)) - std::log(static_cast<long double>(j));

    long double acc = 0;
    for (int j = kRsBlockLength; j >= 1; --j) {
        const long double log_term = log_binom[static_cast<std::size_t>(j)] + j * log_p + (kRsBlockLength - j) * log_q;
        acc += j * std::exp(log_term);
        tail[static_cast<std::size_t>(j - 1)] = acc;
    }
    return tail;
}

double tail_to_ber(long double tail)
{
    return static_cast<double>(tail / kRsBlockLength / 8.0L);
}

void check_ber(double ber)
{
    if (!(ber >= 0.0 && ber <= 1.0))
        throw std::domain_error("pre-FEC BER must lie in [0, 1]");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, int line)
{
    const std::string f = trim(field);
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (f.empty() || end != f.c_str() + f.size())
        throw ModelError("BER table line " + std::to_string(line) + ": bad number '" + f + "'");
    return v;
}

double lerp(double a, double b, double w)
{
    return a + (b - a) * w;
}

} // namespace

ModulationOrder::ModulationOrder(int levels) : levels_(levels), bits_(0)
{
    if (levels < 2 || (levels & (levels - 1)) != 0)
        throw std::invalid_argument("modulation order must be a power of two >= 2, got " + std::to_string(levels));
    while ((1 << bits_) < levels)
        ++bits_;
}

SyntheticBerModel::SyntheticBerModel() : SyntheticBerModel(shipped_coefficients()) {}

SyntheticBerModel::SyntheticBerModel(std::map<int, Coefficients> per_modulation)
    : coefficients_(std::move(per_modulation))
{
    for (const auto& [m, c] : coefficients_) {
        ModulationOrder check(m);
        if (!(c.scale >= 0.0) || !std::isfinite(c.load_exponent) || !std::isfinite(c.port_exponent))
            throw std::invalid_argument("bad synthetic BER coefficients for M = " + std::to_string(m));
    }
}

std::map<int, SyntheticBerModel::Coefficients> SyntheticBerModel::shipped_coefficients()
{
    return {
        {2, {3.2e-10, 0.5, 3.0}},
        {4, {1e-3, 0.5, 0.5}},
        {8, {2.8e-2, 0.5, 0.5}},
    };
}

double SyntheticBerModel::pre_fec_ber(const BerQuery& q) const
{
    const auto it = coefficients_.find(q.modulation);
    if (it == coefficients_.end())
        throw ModelError("synthetic BER model has no coefficients for M = " + std::to_string(q.modulation));
    if (q.awg_ports < 1 || q.wavelength_count < q.awg_ports)
        throw ModelError("synthetic BER model: inconsistent port and wavelength counts");
    const auto& c = it->second;
    double ber = c.scale * std::pow(std::max(q.load, 0.0), c.load_exponent);
    if (q.kind == TrafficKind::interdomain)
        ber *= std::pow(static_cast<double>(q.awg_ports) / q.wavelength_count, c.port_exponent);
    return ber;
}

TableBerModel::TableBerModel(std::vector<Entry> entries)
{
    for (const auto& e : entries) {
        if (!(e.ber >= 0.0 && e.ber <= 1.0))
            throw ModelError("BER table value outside [0, 1]");
        if (e.fsr_count < 1 || !std::isfinite(e.load))
            throw ModelError("BER table has an invalid grid coordinate");
        cells_[e.modulation][{e.fsr_count, e.load}] = e.ber;
    }
    if (cells_.empty())
        throw ModelError("BER table is empty");
}

TableBerModel TableBerModel::read_csv(std::istream& in)
{
    std::vector<Entry> entries;
    std::string line;
    int number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (!header_seen) {
            header_seen = true;
            // Any letter other than an exponent marker means a header row.
            if (t.find_first_of("abcdfghijklmnopqrstuvwxyz") != std::string::npos)
                continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = t.find(',', start);
            fields.push_back(t.substr(start, comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (fields.size() != 4)
            throw ModelError("BER table line " + std::to_string(number) + ": expected 4 fields");
        const double f = parse_number(fields[0], number);
        const double m = parse_number(fields[2], number);
        if (f != std::floor(f) || m != std::floor(m))
            throw ModelError("BER table line " + std::to_string(number) + ": F and M must be integers");
        entries.push_back({static_cast<int>(f), parse_number(fields[1], number), static_cast<int>(m),
                           parse_number(fields[3], number)});
    }
    return TableBerModel(std::move(entries));
}

double TableBerModel::pre_fec_ber(const BerQuery& q) const
{
    const auto mit = cells_.find(q.modulation);
    if (mit == cells_.end())
        throw InterpolationRangeError("BER table has no rows for M = " + std::to_string(q.modulation));
    const auto& grid = mit->second;

    std::set<int> fs;
    std::set<double> loads;
    for (const auto& [key, _] : grid) {
        fs.insert(key.first);
        loads.insert(key.second);
    }

    auto bracket = [](const auto& axis, auto x) {
        auto hi = axis.lower_bound(x);
        if (hi == axis.end())
            return std::optional<std::pair<decltype(x), decltype(x)>>{};
        if (*hi == x)
            return std::optional{std::pair{x, x}};
        if (hi == axis.begin())
            return std::optional<std::pair<decltype(x), decltype(x)>>{};
        return std::optional{std::pair{*std::prev(hi), *hi}};
    };

    const auto fb = bracket(fs, q.fsr_count);
    const auto lb = bracket(loads, q.load);
    if (!fb || !lb)
        throw InterpolationRangeError("BER query (F = " + std::to_string(q.fsr_count) + ", load = "
                                      + std::to_string(q.load) + ") outside the table for M = "
                                      + std::to_string(q.modulation));

    auto cell = [&](int f, double load) {
        const auto it = grid.find({f, load});
        if (it == grid.end())
            throw InterpolationRangeError("BER table misses cell (F = " + std::to_string(f) + ", load = "
                                          + std::to_string(load) + ", M = " + std::to_string(q.modulation) + ")");
        return it->second;
    };

    const auto [f0, f1] = *fb;
    const auto [l0, l1] = *lb;
    const double wf = f1 == f0 ? 0.0 : static_cast<double>(q.fsr_count - f0) / (f1 - f0);
    const double wl = l1 == l0 ? 0.0 : (q.load - l0) / (l1 - l0);
    const double low = lerp(cell(f0, l0), cell(f0, l1), wl);
    const double high = f1 == f0 ? low : lerp(cell(f1, l0), cell(f1, l1), wl);
    return lerp(low, high, wf);
}

double post_fec_ber(double pre_fec_ber, int k)
{
    check_ber(pre_fec_ber);
    if (k < 1 || k > kRsBlockLength || (kRsBlockLength - k) % 2 != 0)
        throw std::invalid_argument("RS(255, k) needs odd k in [1, 255]");
    const auto tail = weighted_tails(pre_fec_ber);
    return tail_to_ber(tail[static_cast<std::size_t>((kRsBlockLength - k) / 2)]);
}

FecSelection fec_select(double pre_fec_ber)
{
    check_ber(pre_fec_ber);
    FecSelection s;
    if (pre_fec_ber > kPreFecCutoff) {
        s.post_fec_ber = pre_fec_ber;
        return s;
    }
    const auto tail = weighted_tails(pre_fec_ber);
    for (int t = 0; t <= kMaxT; ++t) {
        const double post = tail_to_ber(tail[static_cast<std::size_t>(t)]);
        if (post <= kPostFecTarget) {
            s.k = kRsBlockLength - 2 * t;
            s.code_rate = static_cast<double>(*s.k) / kRsBlockLength;
            s.post_fec_ber = post;
            return s;
        }
    }
    s.post_fec_ber = pre_fec_ber;
    return s;
}

double effective_bit_rate(double symbol_rate_gbaud, ModulationOrder m, int k)
{
    return symbol_rate_gbaud * m.bits_per_symbol() * static_cast<double>(k) / kRsBlockLength;
}

namespace {

void check_crosslayer(const SimulationPlan& plan, const std::vector<ModulationOrder>& modulations,
                      double symbol_rate_gbaud)
{
    plan.validate();
    if (!(plan.r_inter > 0.0))
        throw ConfigError("interdomain throughput needs r_inter > 0");
    if (!(symbol_rate_gbaud > 0.0))
        throw ConfigError("symbol rate must be positive");
    if (modulations.empty())
        throw ConfigError("no modulation orders given");
}

} // namespace

CrossLayerReport evaluate_crosslayer(const SimulationPlan& plan, const BerModel& model,
                                     const std::vector<ModulationOrder>& modulations, double symbol_rate_gbaud)
{
    check_crosslayer(plan, modulations, symbol_rate_gbaud);
    return evaluate_crosslayer(plan, simulate_grid(plan), model, modulations, symbol_rate_gbaud);
}

CrossLayerReport evaluate_crosslayer(const SimulationPlan& plan, const std::vector<PointRecords>& grid,
                                     const BerModel& model, const std::vector<ModulationOrder>& modulations,
                                     double symbol_rate_gbaud)
{
    check_crosslayer(plan, modulations, symbol_rate_gbaud);

    CrossLayerReport report;
    for (const auto& point : grid) {
        const int f = point.fsr_count;
        const auto config = plan.switch_config(f);
        const double receivers = static_cast<double>(config.awg_ports()) * config.nodes_per_coupler();
        const auto& records = point.records;
        const double load = plan.loads.at(static_cast<std::size_t>(point.load_index));
        const int runs = static_cast<int>(records.size());
        if (runs == 0)
            throw std::invalid_argument("grid point without run records");

        std::int64_t granted = 0;
        for (const auto& r : records)
            granted += r.inter.granted;

        for (const auto& m : modulations) {
            BerQuery q;
            q.fsr_count = f;
            q.awg_ports = config.awg_ports();
            q.wavelength_count = plan.wavelength_count;
            q.modulation = m.levels();
            q.load = load;
            q.kind = TrafficKind::interdomain;
            const double ber = model.pre_fec_ber(q);
            if (!(ber >= 0.0 && ber <= 1.0))
                throw ModelError("BER model returned " + std::to_string(ber) + " for F = " + std::to_string(f)
                                 + ", load = " + std::to_string(load) + ", M = " + std::to_string(m.levels()));
            const FecSelection fec = fec_select(ber);
            const double rate = fec.k ? effective_bit_rate(symbol_rate_gbaud, m, *fec.k) : 0.0;

            // Every connection of a point shares the operating point, so
            // the per-connection sum is granted * rate.
            double carried = 0;
            for (const auto& r : records)
                carried += static_cast<double>(r.inter.granted) * rate;

            CrossLayerPoint p;
            p.fsr_count = f;
            p.awg_ports = config.awg_ports();
            p.modulation = m.levels();
            p.load = load;
            if (granted > 0) {
                p.mean_pre_fec_ber = ber;
                p.mean_code_rate = fec.code_rate;
                p.k = fec.k;
                p.mean_effective_bit_rate = rate;
            }
            p.granted_per_cycle = static_cast<double>(granted) / runs;
            p.t_inter = carried / runs / (receivers * plan.r_inter);
            report.points.push_back(p);
        }
    }
    return report;
}

} // namespace awgsim
