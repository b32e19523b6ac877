#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "awgsim/montecarlo.hpp"
#include "awgsim/traffic.hpp"

namespace awgsim {

inline constexpr int kRsBlockLength = 255;
inline constexpr double kPreFecCutoff = 3e-2;
inline constexpr double kPostFecTarget = 1e-12;
inline constexpr double kDefaultSymbolRateGbaud = 28.0;

/// PAM order; bits per symbol = log2(M).
class ModulationOrder {
public:
    explicit ModulationOrder(int levels);

    int levels() const noexcept { return levels_; }
    int bits_per_symbol() const noexcept { return bits_; }

    friend auto operator<=>(const ModulationOrder&, const ModulationOrder&) = default;

private:
    int levels_;
    int bits_;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Query point outside the table, or a needed grid cell is missing.
class InterpolationRangeError : public ModelError {
public:
    using ModelError::ModelError;
};

struct BerQuery {
    int fsr_count = 1;
    int awg_ports = 64;
    int wavelength_count = 64;
    int modulation = 2;
    double load = 0;
    TrafficKind kind = TrafficKind::interdomain;
};

/// Pre-FEC bit error rate as a function of the operating point.
class BerModel {
public:
    virtual ~BerModel() = default;
    virtual double pre_fec_ber(const BerQuery& q) const = 0;
};

/// Synthetic default: ber = scale_M * load^a_M * (N / N_W)^g_M for
/// interdomain traffic; intradomain traffic skips the AWG term. The shipped
/// constants are illustrative, not derived from a device model.
class SyntheticBerModel final : public BerModel {
public:
    struct Coefficients {
        double scale = 0;
        double load_exponent = 1;
        double port_exponent = 1;
    };

    SyntheticBerModel();  // shipped constants for 2-, 4- and 8-PAM
    explicit SyntheticBerModel(std::map<int, Coefficients> per_modulation);

    double pre_fec_ber(const BerQuery& q) const override;
    const std::map<int, Coefficients>& coefficients() const noexcept { return coefficients_; }

    static std::map<int, Coefficients> shipped_coefficients();

private:
    std::map<int, Coefficients> coefficients_;
};

/// Table-driven model: bilinear interpolation in (F, load) within each
/// modulation order. CSV columns `fsr,load,modulation,ber` with a header row;
/// '#' lines are comments.
class TableBerModel final : public BerModel {
public:
    struct Entry {
        int fsr_count;
        double load;
        int modulation;
        double ber;
    };

    explicit TableBerModel(std::vector<Entry> entries);
    static TableBerModel read_csv(std::istream& in);

    double pre_fec_ber(const BerQuery& q) const override;

private:
    std::map<int, std::map<std::pair<int, double>, double>> cells_;  // modulation -> (F, load) -> ber
};

/// RS(255, k) rate selection. `k` is empty when the pre-FEC BER is above the
/// recovery cutoff.
struct FecSelection {
    std::optional<int> k;
    double code_rate = 0;
    double post_fec_ber = 0;  // estimate at the selected k
};

/// Bounded-distance RS estimate of the post-FEC BER for t = (255 - k) / 2
/// correctable byte errors: byte error probability p = 1 - (1 - ber)^8,
/// post SER = (1/255) sum_{j>t} j C(255,j) p^j (1-p)^(255-j), BER = SER / 8.
double post_fec_ber(double pre_fec_ber, int k);

/// Largest k with 255 - k even whose post-FEC estimate is at most 1e-12.
/// Throws std::domain_error outside [0, 1].
FecSelection fec_select(double pre_fec_ber);

/// Gb/s carried by one connection.
double effective_bit_rate(double symbol_rate_gbaud, ModulationOrder m, int k);

struct CrossLayerPoint {
    int fsr_count = 1;
    int awg_ports = 0;
    int modulation = 2;
    double load = 0;
    std::optional<double> mean_pre_fec_ber;  // over granted connections
    std::optional<double> mean_code_rate;
    std::optional<int> k;                    // when all connections share one k
    double mean_effective_bit_rate = 0;      // Gb/s per granted connection
    double granted_per_cycle = 0;
    double t_inter = 0;                      // Gb/s per node, normalized by r_inter
};

struct CrossLayerReport {
    std::vector<CrossLayerPoint> points;  // F-major, then load, then modulation
};

/// For every (F, load) runs the Monte Carlo cycles once, then for each
/// modulation order prices every granted interdomain connection with the
/// model's BER and the selected code. Connections with no recoverable code
/// contribute zero. Throws ModelError (or a subclass) if the model fails or
/// returns a value outside [0, 1], ConfigError for an invalid plan.
CrossLayerReport evaluate_crosslayer(const SimulationPlan& plan, const BerModel& model,
                                     const std::vector<ModulationOrder>& modulations,
                                     double symbol_rate_gbaud = kDefaultSymbolRateGbaud);

/// Same, pricing previously simulated grid records (see simulate_grid).
CrossLayerReport evaluate_crosslayer(const SimulationPlan& plan, const std::vector<PointRecords>& grid,
                                     const BerModel& model, const std::vector<ModulationOrder>& modulations,
                                     double symbol_rate_gbaud = kDefaultSymbolRateGbaud);

} // namespace awgsim
