#include "rrbeam/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "rrbeam/types.hpp"

namespace rrbeam {

namespace {

constexpr std::pair<Algorithm, std::string_view> kAlgorithmNames[] = {
    {Algorithm::MvdrSmi, "mvdr-smi"},
    {Algorithm::MvdrSg, "mvdr-sg"},
    {Algorithm::MvdrRls, "mvdr-rls"},
    {Algorithm::RcbFullRank, "rcb-fullrank"},
    {Algorithm::KrylovRls, "krylov-rls"},
    {Algorithm::RcbKrylovRls, "rcb-krylov-rls"},
    {Algorithm::MvdrMjioSg, "mvdr-mjio-sg"},
    {Algorithm::MvdrMjioRls, "mvdr-mjio-rls"},
    {Algorithm::RcbMjioSg, "rcb-mjio-sg"},
    {Algorithm::RcbMjioRls, "rcb-mjio-rls"},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(17);
    out << v;
    return out.str();
}

class Parser {
public:
    Parser(std::string_view origin) : origin_(origin) {}

    [[noreturn]] void fail(int line, const std::string& message) const {
        throw ScenarioParseError(origin_, line, message);
    }

    double to_double(int line, std::string_view key, std::string_view value) const {
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
            fail(line, "field '" + std::string(key) + "': expected a real number, got '" +
                           std::string(value) + "'");
        }
        return out;
    }

    template <typename Int>
    Int to_integer(int line, std::string_view key, std::string_view value) const {
        Int out{};
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            fail(line, "field '" + std::string(key) + "': expected an integer, got '" +
                           std::string(value) + "'");
        }
        return out;
    }

    bool to_bool(int line, std::string_view key, std::string_view value) const {
        if (value == "true") return true;
        if (value == "false") return false;
        fail(line, "field '" + std::string(key) + "': expected true or false, got '" +
                       std::string(value) + "'");
    }

private:
    std::string origin_;
};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    for (const auto& [id, name] : kAlgorithmNames) {
        if (id == algorithm) return name;
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (const auto& [id, label] : kAlgorithmNames) {
        if (label == name) return id;
    }
    throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> list = [] {
        std::vector<Algorithm> out;
        for (const auto& entry : kAlgorithmNames) out.push_back(entry.first);
        return out;
    }();
    return list;
}

ScenarioParseError::ScenarioParseError(std::string origin, int line, const std::string& message)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + message), line_(line) {}

const SourceSpec& ScenarioConfig::soi() const {
    for (const auto& s : sources) {
        if (s.is_soi) return s;
    }
    throw InvalidArgument("scenario has no signal of interest");
}

double ScenarioConfig::soi_power() const { return std::pow(10.0, snr_db / 10.0); }

double ScenarioConfig::source_power(std::size_t k) const {
    const SourceSpec& s = sources.at(k);
    return s.is_soi ? soi_power() : std::pow(10.0, (snr_db + s.power_db) / 10.0);
}

void apply_defaults(ScenarioConfig& config) {
    const int m = config.geometry.num_sensors;
    if (config.delta == 0.0 && m > 0) config.delta = 100.0 / m;
    if (config.epsilon == 0.0) {
        if (m == 64) config.epsilon = 140.0;
        else if (m == 320) config.epsilon = 800.0;
    }
}

void validate(const ScenarioConfig& c) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw InvalidArgument("invalid scenario: " + what);
    };
    require(c.geometry.num_sensors >= 2, "num_sensors >= 2");
    require(c.geometry.spacing_ratio > 0.0, "spacing_ratio > 0");
    require(std::count_if(c.sources.begin(), c.sources.end(),
                          [](const SourceSpec& s) { return s.is_soi; }) == 1,
            "exactly one source with is_soi = true");
    for (const auto& s : c.sources) {
        require(s.doa_degrees > 0.0 && s.doa_degrees < 180.0, "doa_degrees in (0, 180)");
    }
    const auto& soi = c.soi();
    require(soi.power_db == c.snr_db, "signal-of-interest power_db equals snr_db");
    require(c.mismatch_max_degrees >= 0.0, "mismatch_max_degrees >= 0");
    require(c.rank >= 1, "rank >= 1");
    require(c.rank <= c.geometry.num_sensors, "rank <= num_sensors");
    require(c.snapshots >= 1, "snapshots >= 1");
    require(c.runs >= 1, "runs >= 1");
    require(c.forgetting > 0.0 && c.forgetting <= 1.0, "forgetting in (0, 1]");
    require(c.delta > 0.0, "delta > 0");
    require(c.epsilon > 0.0, "epsilon > 0 (no default for this num_sensors)");
    require(c.mu_w >= 0.0 && c.mu_s >= 0.0 && c.mu_a >= 0.0, "step sizes >= 0");
    require(c.perturbation_degrees >= 0.0, "perturbation_degrees >= 0");
    require(!c.algorithms.empty(), "at least one algorithm");
    const double lo = soi.doa_degrees - c.mismatch_max_degrees -
                      std::ceil((c.rank - 1) / 2.0) * c.perturbation_degrees;
    const double hi = soi.doa_degrees + c.mismatch_max_degrees +
                      std::ceil((c.rank - 1) / 2.0) * c.perturbation_degrees;
    require(lo > 0.0 && hi < 180.0, "presumed and perturbed DoAs stay inside (0, 180)");
}

ScenarioConfig parse_scenario(std::string_view text, std::string_view origin) {
    Parser parser(origin);
    ScenarioConfig config;
    config.delta = 0.0;
    config.epsilon = 0.0;
    std::set<std::string> seen_global;
    std::set<std::string> seen_source;
    std::optional<double> snr;
    std::vector<std::optional<double>> source_power;
    bool in_source = false;
    bool algorithms_set = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line != "[source]") parser.fail(line_no, "unknown section '" + std::string(line) + "'");
            config.sources.push_back(SourceSpec{});
            source_power.emplace_back();
            seen_source.clear();
            in_source = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parser.fail(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) parser.fail(line_no, "field '" + key + "' has no value");

        if (in_source) {
            if (!seen_source.insert(key).second) parser.fail(line_no, "duplicate field '" + key + "'");
            SourceSpec& s = config.sources.back();
            if (key == "doa_degrees") s.doa_degrees = parser.to_double(line_no, key, value);
            else if (key == "power_db") source_power.back() = parser.to_double(line_no, key, value);
            else if (key == "is_soi") s.is_soi = parser.to_bool(line_no, key, value);
            else parser.fail(line_no, "unknown source field '" + key + "'");
            continue;
        }

        if (!seen_global.insert(key).second) parser.fail(line_no, "duplicate field '" + key + "'");
        if (key == "num_sensors") config.geometry.num_sensors = parser.to_integer<int>(line_no, key, value);
        else if (key == "spacing_ratio") config.geometry.spacing_ratio = parser.to_double(line_no, key, value);
        else if (key == "snr_db") snr = parser.to_double(line_no, key, value);
        else if (key == "mismatch_max_degrees") config.mismatch_max_degrees = parser.to_double(line_no, key, value);
        else if (key == "rank") config.rank = parser.to_integer<int>(line_no, key, value);
        else if (key == "snapshots") config.snapshots = parser.to_integer<int>(line_no, key, value);
        else if (key == "runs") config.runs = parser.to_integer<int>(line_no, key, value);
        else if (key == "seed") config.seed = parser.to_integer<std::uint64_t>(line_no, key, value);
        else if (key == "forgetting") config.forgetting = parser.to_double(line_no, key, value);
        else if (key == "delta") config.delta = parser.to_double(line_no, key, value);
        else if (key == "epsilon") config.epsilon = parser.to_double(line_no, key, value);
        else if (key == "mu_w") config.mu_w = parser.to_double(line_no, key, value);
        else if (key == "mu_s") config.mu_s = parser.to_double(line_no, key, value);
        else if (key == "mu_a") config.mu_a = parser.to_double(line_no, key, value);
        else if (key == "perturbation_degrees") config.perturbation_degrees = parser.to_double(line_no, key, value);
        else if (key == "gram_schmidt") config.gram_schmidt = parser.to_bool(line_no, key, value);
        else if (key == "algorithms") {
            algorithms_set = true;
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const std::string_view item = trim(rest.substr(0, comma));
                try {
                    config.algorithms.push_back(parse_algorithm(item));
                } catch (const InvalidArgument& e) {
                    parser.fail(line_no, e.what());
                }
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else {
            parser.fail(line_no, "unknown field '" + key + "'");
        }
    }

    if (!seen_global.count("num_sensors")) parser.fail(line_no, "missing required field 'num_sensors'");
    if (config.sources.empty()) parser.fail(line_no, "at least one [source] block is required");

    // The SoI power and snr_db describe the same quantity; either may be given.
    for (std::size_t k = 0; k < config.sources.size(); ++k) {
        if (config.sources[k].is_soi && !source_power[k] && snr) source_power[k] = snr;
        if (config.sources[k].is_soi && source_power[k] && !snr) snr = source_power[k];
    }
    config.snr_db = snr.value_or(10.0);
    for (std::size_t k = 0; k < config.sources.size(); ++k) {
        config.sources[k].power_db =
            source_power[k].value_or(config.sources[k].is_soi ? config.snr_db : 0.0);
    }
    if (!algorithms_set) config.algorithms = all_algorithms();

    apply_defaults(config);
    validate(config);
    return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& name_or_path) {
    for (const auto& b : bundled_scenarios()) {
        if (name_or_path == b.name) return parse_scenario(b.text, b.name);
    }
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open scenario '" + name_or_path.string() +
                                 "' (not a file and not a bundled scenario)");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), name_or_path.string());
}

std::string format_scenario(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "num_sensors = " << c.geometry.num_sensors << '\n'
        << "spacing_ratio = " << format_double(c.geometry.spacing_ratio) << '\n'
        << "snr_db = " << format_double(c.snr_db) << '\n'
        << "mismatch_max_degrees = " << format_double(c.mismatch_max_degrees) << '\n'
        << "rank = " << c.rank << '\n'
        << "snapshots = " << c.snapshots << '\n'
        << "runs = " << c.runs << '\n'
        << "seed = " << c.seed << '\n'
        << "forgetting = " << format_double(c.forgetting) << '\n'
        << "delta = " << format_double(c.delta) << '\n'
        << "epsilon = " << format_double(c.epsilon) << '\n'
        << "mu_w = " << format_double(c.mu_w) << '\n'
        << "mu_s = " << format_double(c.mu_s) << '\n'
        << "mu_a = " << format_double(c.mu_a) << '\n'
        << "perturbation_degrees = " << format_double(c.perturbation_degrees) << '\n'
        << "gram_schmidt = " << (c.gram_schmidt ? "true" : "false") << '\n'
        << "algorithms = ";
    for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
        out << (i ? ", " : "") << to_string(c.algorithms[i]);
    }
    out << '\n';
    for (const auto& s : c.sources) {
        out << "\n[source]\n"
            << "doa_degrees = " << format_double(s.doa_degrees) << '\n'
            << "power_db = " << format_double(s.power_db) << '\n'
            << "is_soi = " << (s.is_soi ? "true" : "false") << '\n';
    }
    return out.str();
}

std::uint64_t scenario_hash(const ScenarioConfig& config) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char ch : format_scenario(config)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace rrbeam
