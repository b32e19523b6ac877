#include "awgsim/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "awgsim/csv.hpp"
#include "json.hpp"

namespace awgsim {

using nlohmann::json;

namespace {

std::string with_location(const std::string& source, int line, const std::string& message)
{
    if (line > 0)
        return source + ":" + std::to_string(line) + ": " + message;
    return source + ": " + message;
}

int line_at(const std::string& text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Maps a key path to the line of its last key by scanning the raw text; good
// enough for error messages and never used for parsing.
class KeyLocator {
public:
    KeyLocator(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

    // A missing key resolves to its deepest present ancestor.
    int line_of(std::initializer_list<std::string_view> path) const
    {
        std::size_t pos = 0;
        int line = 0;
        for (auto key : path) {
            pos = text_.find("\"" + std::string(key) + "\"", pos);
            if (pos == std::string::npos)
                return line;
            line = line_at(text_, pos);
        }
        return line;
    }

    [[noreturn]] void fail(std::initializer_list<std::string_view> path, const std::string& message) const
    {
        throw ConfigValidationError(source_, line_of(path), message);
    }

    const std::string& source() const noexcept { return source_; }

private:
    const std::string& text_;
    std::string source_;
};

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed, const KeyLocator& loc,
                    std::string_view section)
{
    for (const auto& [key, _] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            const std::string where = section.empty() ? "" : " in '" + std::string(section) + "'";
            loc.fail({key}, "unknown key '" + key + "'" + where);
        }
    }
}

int get_int(const json& j, std::initializer_list<std::string_view> path, const KeyLocator& loc)
{
    if (!j.is_number_integer())
        loc.fail(path, "'" + std::string(*(path.end() - 1)) + "' must be an integer");
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        loc.fail(path, "'" + std::string(*(path.end() - 1)) + "' is out of range");
    return static_cast<int>(v);
}

double get_double(const json& j, std::initializer_list<std::string_view> path, const KeyLocator& loc)
{
    if (!j.is_number())
        loc.fail(path, "'" + std::string(*(path.end() - 1)) + "' must be a number");
    return j.get<double>();
}

bool get_bool(const json& j, std::initializer_list<std::string_view> path, const KeyLocator& loc)
{
    if (!j.is_boolean())
        loc.fail(path, "'" + std::string(*(path.end() - 1)) + "' must be true or false");
    return j.get<bool>();
}

std::string get_string(const json& j, std::initializer_list<std::string_view> path, const KeyLocator& loc)
{
    if (!j.is_string())
        loc.fail(path, "'" + std::string(*(path.end() - 1)) + "' must be a string");
    return j.get<std::string>();
}

json coefficients_json(const std::map<int, SyntheticBerModel::Coefficients>& c)
{
    json out = json::object();
    for (const auto& [m, k] : c)
        out[std::to_string(m)] = {{"scale", k.scale}, {"load_exponent", k.load_exponent},
                                  {"port_exponent", k.port_exponent}};
    return out;
}

json config_json(const ExperimentConfig& c, bool for_hash)
{
    const auto& p = c.plan;
    json j;
    j["switch"] = {{"wavelength_count", p.wavelength_count}, {"coupler_ports", p.coupler_ports}};
    j["fsr_list"] = p.fsr_list;
    j["load_grid"] = p.loads;
    j["r_inter"] = p.r_inter;
    j["runs"] = p.runs;
    j["seed"] = p.master_seed;
    j["scheduler"] = {{"start_policy", to_string(p.policy.start)},
                      {"wavelength_policy", to_string(p.policy.intra_wavelength)},
                      {"physical_occupancy", p.policy.physical_occupancy}};
    j["ber_model"] = {{"type", c.ber_model.type},
                      {"coefficients", coefficients_json(c.ber_model.coefficients)},
                      {"table_path", c.ber_model.table_path}};
    j["modulations"] = c.modulations;
    j["symbol_rate_gbaud"] = c.symbol_rate_gbaud;
    j["tolerance"] = c.tolerance;
    if (!for_hash) {
        j["threads"] = p.threads;
        j["output_dir"] = c.output_dir;
    }
    return j;
}

// Semantic checks shared by file parsing and programmatic configs.
void check(const ExperimentConfig& c, const KeyLocator& loc)
{
    const auto& p = c.plan;
    if (p.wavelength_count < 2)
        loc.fail({"switch", "wavelength_count"}, "wavelength_count must be at least 2");
    if (p.coupler_ports < 2)
        loc.fail({"switch", "coupler_ports"}, "coupler_ports must be at least 2");
    if (p.fsr_list.empty())
        loc.fail({"fsr_list"}, "fsr_list must not be empty");
    for (int f : p.fsr_list) {
        if (f < 1)
            loc.fail({"fsr_list"}, "FSR count " + std::to_string(f) + " must be positive");
        if (p.wavelength_count % f != 0)
            loc.fail({"fsr_list"}, "FSR count " + std::to_string(f) + " does not divide wavelength_count "
                                       + std::to_string(p.wavelength_count));
        if (p.wavelength_count / f < 2)
            loc.fail({"fsr_list"}, "FSR count " + std::to_string(f) + " leaves fewer than two AWG ports");
    }
    if (std::set<int>(p.fsr_list.begin(), p.fsr_list.end()).size() != p.fsr_list.size())
        loc.fail({"fsr_list"}, "fsr_list has duplicates");
    if (p.loads.empty())
        loc.fail({"load_grid"}, "load_grid must not be empty");
    for (double l : p.loads) {
        if (!(l >= 0.0 && l <= 1.0))
            loc.fail({"load_grid"}, "load " + format_double(l) + " outside [0, 1]");
    }
    if (!(p.r_inter >= 0.0 && p.r_inter <= 1.0))
        loc.fail({"r_inter"}, "r_inter must lie in [0, 1]");
    if (p.coupler_ports == 2 && p.r_inter < 1.0)
        loc.fail({"r_inter"}, "coupler_ports = 2 leaves no intradomain destination; set r_inter = 1");
    if (p.runs < 1)
        loc.fail({"runs"}, "runs must be at least 1");
    if (p.threads < 0)
        loc.fail({"threads"}, "threads must be nonnegative");

    if (c.modulations.empty())
        loc.fail({"modulations"}, "modulations must not be empty");
    for (int m : c.modulations) {
        if (m < 2 || (m & (m - 1)) != 0)
            loc.fail({"modulations"}, "modulation order " + std::to_string(m) + " is not a power of two >= 2");
    }
    if (!(c.symbol_rate_gbaud > 0.0))
        loc.fail({"symbol_rate_gbaud"}, "symbol_rate_gbaud must be positive");
    if (!(c.tolerance > 0.0))
        loc.fail({"tolerance"}, "tolerance must be positive");

    if (c.ber_model.type == "synthetic") {
        for (int m : c.modulations) {
            if (!c.ber_model.coefficients.count(m))
                loc.fail({"ber_model", "coefficients"}, "no synthetic coefficients for M = " + std::to_string(m));
        }
        for (const auto& [m, k] : c.ber_model.coefficients) {
            if (m < 2 || (m & (m - 1)) != 0)
                loc.fail({"ber_model", "coefficients"}, "coefficient key " + std::to_string(m)
                                                            + " is not a power of two >= 2");
            if (!(k.scale >= 0.0) || !std::isfinite(k.scale) || !std::isfinite(k.load_exponent)
                || !std::isfinite(k.port_exponent) || k.load_exponent < 0.0 || k.port_exponent < 0.0)
                loc.fail({"ber_model", "coefficients", std::to_string(m)},
                         "coefficients for M = " + std::to_string(m) + " must be finite and nonnegative");
        }
    } else if (c.ber_model.type == "table") {
        if (c.ber_model.table_path.empty())
            loc.fail({"ber_model", "table_path"}, "table model needs table_path");
    } else {
        loc.fail({"ber_model", "type"}, "ber_model.type must be 'synthetic' or 'table'");
    }
}

void parse_into(ExperimentConfig& c, const json& root, const KeyLocator& loc, const std::string& base_dir)
{
    if (!root.is_object())
        throw ConfigValidationError(loc.source(), 1, "top level must be an object");
    reject_unknown(root,
                   {"switch", "fsr_list", "load_grid", "r_inter", "runs", "seed", "threads", "scheduler",
                    "ber_model", "modulations", "symbol_rate_gbaud", "tolerance", "output_dir"},
                   loc, "");
    auto& p = c.plan;

    if (root.contains("switch")) {
        const auto& s = root["switch"];
        if (!s.is_object())
            loc.fail({"switch"}, "'switch' must be an object");
        reject_unknown(s, {"wavelength_count", "coupler_ports"}, loc, "switch");
        if (s.contains("wavelength_count"))
            p.wavelength_count = get_int(s["wavelength_count"], {"switch", "wavelength_count"}, loc);
        if (s.contains("coupler_ports"))
            p.coupler_ports = get_int(s["coupler_ports"], {"switch", "coupler_ports"}, loc);
    }
    if (root.contains("fsr_list")) {
        const auto& a = root["fsr_list"];
        if (!a.is_array())
            loc.fail({"fsr_list"}, "'fsr_list' must be an array of integers");
        p.fsr_list.clear();
        for (const auto& v : a)
            p.fsr_list.push_back(get_int(v, {"fsr_list"}, loc));
    }
    if (root.contains("load_grid")) {
        const auto& a = root["load_grid"];
        if (!a.is_array())
            loc.fail({"load_grid"}, "'load_grid' must be an array of numbers");
        p.loads.clear();
        for (const auto& v : a)
            p.loads.push_back(get_double(v, {"load_grid"}, loc));
    }
    if (root.contains("r_inter"))
        p.r_inter = get_double(root["r_inter"], {"r_inter"}, loc);
    if (root.contains("runs"))
        p.runs = get_int(root["runs"], {"runs"}, loc);
    if (root.contains("seed")) {
        const auto& s = root["seed"];
        if (!s.is_number_unsigned())
            loc.fail({"seed"}, "'seed' must be a nonnegative integer");
        p.master_seed = s.get<std::uint64_t>();
    }
    if (root.contains("threads"))
        p.threads = get_int(root["threads"], {"threads"}, loc);

    if (root.contains("scheduler")) {
        const auto& s = root["scheduler"];
        if (!s.is_object())
            loc.fail({"scheduler"}, "'scheduler' must be an object");
        reject_unknown(s, {"start_policy", "wavelength_policy", "physical_occupancy"}, loc, "scheduler");
        if (s.contains("start_policy")) {
            const auto v = get_string(s["start_policy"], {"scheduler", "start_policy"}, loc);
            try {
                p.policy.start = parse_start_policy(v);
            } catch (const ConfigError& e) {
                loc.fail({"scheduler", "start_policy"}, e.what());
            }
        }
        if (s.contains("wavelength_policy")) {
            const auto v = get_string(s["wavelength_policy"], {"scheduler", "wavelength_policy"}, loc);
            try {
                p.policy.intra_wavelength = parse_wavelength_policy(v);
            } catch (const ConfigError& e) {
                loc.fail({"scheduler", "wavelength_policy"}, e.what());
            }
        }
        if (s.contains("physical_occupancy"))
            p.policy.physical_occupancy = get_bool(s["physical_occupancy"], {"scheduler", "physical_occupancy"}, loc);
    }

    if (root.contains("ber_model")) {
        const auto& b = root["ber_model"];
        if (!b.is_object())
            loc.fail({"ber_model"}, "'ber_model' must be an object");
        reject_unknown(b, {"type", "coefficients", "table_path"}, loc, "ber_model");
        if (b.contains("type"))
            c.ber_model.type = get_string(b["type"], {"ber_model", "type"}, loc);
        if (b.contains("coefficients")) {
            const auto& co = b["coefficients"];
            if (!co.is_object())
                loc.fail({"ber_model", "coefficients"}, "'coefficients' must map modulation order to parameters");
            c.ber_model.coefficients.clear();
            for (const auto& [key, v] : co.items()) {
                char* end = nullptr;
                errno = 0;
                const long m = std::strtol(key.c_str(), &end, 10);
                if (key.empty() || *end != '\0' || errno != 0 || m < 2 || m > (1L << 20))
                    loc.fail({"ber_model", "coefficients", key}, "coefficient key '" + key + "' is not a modulation order");
                if (!v.is_object())
                    loc.fail({"ber_model", "coefficients", key}, "coefficients for M = " + key + " must be an object");
                reject_unknown(v, {"scale", "load_exponent", "port_exponent"}, loc, "coefficients");
                SyntheticBerModel::Coefficients k;
                if (!v.contains("scale") || !v.contains("load_exponent") || !v.contains("port_exponent"))
                    loc.fail({"ber_model", "coefficients", key},
                             "coefficients for M = " + key + " need scale, load_exponent and port_exponent");
                k.scale = get_double(v["scale"], {"ber_model", "coefficients", key, "scale"}, loc);
                k.load_exponent = get_double(v["load_exponent"], {"ber_model", "coefficients", key, "load_exponent"}, loc);
                k.port_exponent = get_double(v["port_exponent"], {"ber_model", "coefficients", key, "port_exponent"}, loc);
                c.ber_model.coefficients[static_cast<int>(m)] = k;
            }
        }
        if (b.contains("table_path")) {
            std::string path = get_string(b["table_path"], {"ber_model", "table_path"}, loc);
            if (!path.empty() && std::filesystem::path(path).is_relative())
                path = (std::filesystem::path(base_dir) / path).lexically_normal().string();
            c.ber_model.table_path = path;
        }
    }

    if (root.contains("modulations")) {
        const auto& a = root["modulations"];
        if (!a.is_array())
            loc.fail({"modulations"}, "'modulations' must be an array of integers");
        c.modulations.clear();
        for (const auto& v : a)
            c.modulations.push_back(get_int(v, {"modulations"}, loc));
    }
    if (root.contains("symbol_rate_gbaud"))
        c.symbol_rate_gbaud = get_double(root["symbol_rate_gbaud"], {"symbol_rate_gbaud"}, loc);
    if (root.contains("tolerance"))
        c.tolerance = get_double(root["tolerance"], {"tolerance"}, loc);
    if (root.contains("output_dir"))
        c.output_dir = get_string(root["output_dir"], {"output_dir"}, loc);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigValidationError(path, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ConfigValidationError::ConfigValidationError(const std::string& source, int line, const std::string& message)
    : ConfigError(with_location(source, line, message)), line_(line)
{
}

void ExperimentConfig::apply_reference_defaults()
{
    plan.runs = 10000;
    plan.fsr_list = {1, 2, 4, 8};
    plan.coupler_ports = 64;
    plan.wavelength_count = 64;
    plan.r_inter = 0.25;
    symbol_rate_gbaud = 28.0;
}

void ExperimentConfig::validate() const
{
    const std::string empty;
    check(*this, KeyLocator(empty, "config"));
}

std::string ExperimentConfig::to_json() const
{
    return config_json(*this, false).dump(2) + "\n";
}

std::uint64_t ExperimentConfig::hash() const
{
    std::string blob = config_json(*this, true).dump();
    if (ber_model.type == "table") {
        std::ifstream in(ber_model.table_path, std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            blob += '\n';
            blob += ss.str();
        }
    }
    return fnv1a64(blob);
}

std::unique_ptr<BerModel> ExperimentConfig::make_ber_model() const
{
    if (ber_model.type == "table") {
        std::ifstream in(ber_model.table_path);
        if (!in)
            throw ConfigValidationError(ber_model.table_path, 0, "cannot open BER table");
        return std::make_unique<TableBerModel>(TableBerModel::read_csv(in));
    }
    return std::make_unique<SyntheticBerModel>(ber_model.coefficients);
}

std::vector<ModulationOrder> ExperimentConfig::modulation_orders() const
{
    std::vector<ModulationOrder> out;
    for (int m : modulations)
        out.emplace_back(m);
    return out;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source, const std::string& base_dir)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos)
            what = what.substr(pos);
        throw ConfigValidationError(source, line_at(text, at), what);
    }
    const KeyLocator loc(text, source);
    ExperimentConfig c;
    parse_into(c, root, loc, base_dir);
    check(c, loc);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    const std::string text = read_file(path);
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(text, path, dir.empty() ? "." : dir.string());
}

void apply_env_overrides(ExperimentConfig& config, const EnvLookup& lookup)
{
    auto number = [&](const char* name, auto& target, auto lo) {
        const char* v = lookup(name);
        if (!v)
            return;
        char* end = nullptr;
        errno = 0;
        const long long parsed = std::strtoll(v, &end, 10);
        if (*v == '\0' || *end != '\0' || errno != 0 || parsed < static_cast<long long>(lo))
            throw ConfigValidationError("environment", 0, std::string(name) + " must be an integer >= "
                                                              + std::to_string(lo));
        target = static_cast<std::remove_reference_t<decltype(target)>>(parsed);
    };

    if (const char* v = lookup("AWGSIM_SEED")) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long parsed = std::strtoull(v, &end, 10);
        if (*v == '\0' || *v == '-' || *end != '\0' || errno != 0)
            throw ConfigValidationError("environment", 0, "AWGSIM_SEED must be an unsigned 64-bit integer");
        config.plan.master_seed = parsed;
    }
    number("AWGSIM_RUNS", config.plan.runs, 1);
    number("AWGSIM_THREADS", config.plan.threads, 0);
    if (const char* v = lookup("AWGSIM_OUT"))
        config.output_dir = v;
    if (const char* v = lookup("AWGSIM_WAVELENGTH_POLICY")) {
        try {
            config.plan.policy.intra_wavelength = parse_wavelength_policy(v);
        } catch (const ConfigError& e) {
            throw ConfigValidationError("environment", 0, e.what());
        }
    }
    if (const char* v = lookup("AWGSIM_PHYSICAL_OCCUPANCY")) {
        const std::string s = v;
        if (s == "1" || s == "true")
            config.plan.policy.physical_occupancy = true;
        else if (s == "0" || s == "false")
            config.plan.policy.physical_occupancy = false;
        else
            throw ConfigValidationError("environment", 0, "AWGSIM_PHYSICAL_OCCUPANCY must be 0, 1, true or false");
    }
}

std::string to_string(StartPolicy p)
{
    return p == StartPolicy::round_robin ? "round_robin" : "random";
}

std::string to_string(WavelengthPolicy p)
{
    return p == WavelengthPolicy::first_fit ? "first_fit" : "random";
}

StartPolicy parse_start_policy(const std::string& s)
{
    if (s == "round_robin" || s == "round-robin")
        return StartPolicy::round_robin;
    if (s == "random")
        return StartPolicy::random;
    throw ConfigError("start policy must be 'round_robin' or 'random', got '" + s + "'");
}

WavelengthPolicy parse_wavelength_policy(const std::string& s)
{
    if (s == "first_fit" || s == "first-fit")
        return WavelengthPolicy::first_fit;
    if (s == "random")
        return WavelengthPolicy::random;
    throw ConfigError("wavelength policy must be 'random' or 'first-fit', got '" + s + "'");
}

} // namespace awgsim
