#include "wadmit/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wadmit {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(const std::string& s) {
    std::string spaced = s;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in(spaced);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

[[noreturn]] void fail(int line, const std::string& field, const std::string& msg) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << field << ": " << msg;
    throw ConfigError(os.str());
}

template <class T>
T parse_number(const std::string& tok, int line, const std::string& field) {
    T v{};
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(line, field, "cannot parse '" + tok + "' as a number");
    return v;
}

template <class T>
T scalar(const std::string& value, int line, const std::string& field) {
    const auto t = tokens(value);
    if (t.size() != 1) fail(line, field, "expected a single value");
    return parse_number<T>(t[0], line, field);
}

template <class T>
std::vector<T> list(const std::string& value, int line, const std::string& field) {
    std::vector<T> out;
    for (const auto& t : tokens(value)) out.push_back(parse_number<T>(t, line, field));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        if constexpr (std::is_floating_point_v<T>) out += fmt(v[i]);
        else out += std::to_string(v[i]);
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"", {"version"}},
        {"topology", {"links", "channel"}},
        {"experiment",
         {"active", "new_link", "x_bar", "epsilon", "u", "u_n", "rho", "horizon", "warmup", "seed", "window",
          "arrival_override", "output"}},
        {"verdicts", {"slope_threshold", "split_tolerance", "delta_admit", "disturbance_tol"}},
    };
    return keys;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string section;
    bool have_conflicts = false;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string body = raw;
        if (const auto hash = body.find('#'); hash != std::string::npos) body.erase(hash);
        body = trim(body);
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']') fail(line, "section", "unterminated section header");
            section = trim(std::string_view(body).substr(1, body.size() - 2));
            if (section != "conflicts" && !known_keys().count(section)) fail(line, "section", "unknown section [" + section + "]");
            if (section == "conflicts") {
                if (have_conflicts) fail(line, "conflicts", "section appears twice");
                have_conflicts = true;
            }
            continue;
        }

        if (section == "conflicts") {
            std::string row = body;
            std::replace(row.begin(), row.end(), '-', ' ');
            const auto ids = list<std::size_t>(row, line, "conflicts");
            if (ids.size() != 2) fail(line, "conflicts", "each row needs exactly two link ids");
            cfg.conflicts.emplace_back(ids[0], ids[1]);
            continue;
        }

        const auto eq = body.find('=');
        if (eq == std::string::npos) fail(line, "syntax", "expected 'key = value'");
        const auto key = trim(std::string_view(body).substr(0, eq));
        const auto value = trim(std::string_view(body).substr(eq + 1));
        if (!known_keys().at(section).count(key))
            fail(line, key, "unknown key in section [" + (section.empty() ? std::string("top") : section) + "]");
        if (!seen.insert(key).second) fail(line, key, "given more than once");

        if (key == "version") cfg.version = scalar<int>(value, line, key);
        else if (key == "links") cfg.links = scalar<std::size_t>(value, line, key);
        else if (key == "channel") cfg.channel = list<double>(value, line, key);
        else if (key == "active") cfg.active = list<std::size_t>(value, line, key);
        else if (key == "new_link") cfg.new_link = scalar<std::size_t>(value, line, key);
        else if (key == "x_bar") cfg.x_bar = scalar<double>(value, line, key);
        else if (key == "epsilon") cfg.epsilon = scalar<double>(value, line, key);
        else if (key == "u") cfg.u = scalar<double>(value, line, key);
        else if (key == "u_n") cfg.u_n = scalar<double>(value, line, key);
        else if (key == "rho") cfg.rho = scalar<double>(value, line, key);
        else if (key == "horizon") cfg.horizon = scalar<std::int64_t>(value, line, key);
        else if (key == "warmup") cfg.warmup = scalar<std::int64_t>(value, line, key);
        else if (key == "seed") cfg.seed = scalar<std::uint64_t>(value, line, key);
        else if (key == "window") cfg.window = scalar<std::int64_t>(value, line, key);
        else if (key == "arrival_override") cfg.arrival_override = list<double>(value, line, key);
        else if (key == "output") cfg.output = value;
        else if (key == "slope_threshold") cfg.slope_threshold = scalar<double>(value, line, key);
        else if (key == "split_tolerance") cfg.split_tolerance = scalar<double>(value, line, key);
        else if (key == "delta_admit") cfg.delta_admit = scalar<double>(value, line, key);
        else if (key == "disturbance_tol") cfg.disturbance_tol = scalar<double>(value, line, key);
    }

    for (const char* required : {"version", "links", "channel", "active"})
        if (!seen.count(required)) fail(0, required, "missing required field");
    if (cfg.version != kConfigVersion) fail(0, "version", "unsupported config version " + std::to_string(cfg.version));
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "version = " << cfg.version << "\n\n";
    os << "[topology]\n";
    os << "links = " << cfg.links << "\n";
    os << "channel = " << join(cfg.channel) << "\n\n";
    os << "[conflicts]\n";
    for (const auto& [a, b] : cfg.conflicts) os << a << ' ' << b << "\n";
    os << "\n[experiment]\n";
    os << "active = " << join(cfg.active) << "\n";
    if (cfg.new_link) os << "new_link = " << *cfg.new_link << "\n";
    os << "x_bar = " << fmt(cfg.x_bar) << "\n";
    os << "epsilon = " << fmt(cfg.epsilon) << "\n";
    os << "u = " << fmt(cfg.u) << "\n";
    if (cfg.u_n) os << "u_n = " << fmt(*cfg.u_n) << "\n";
    os << "rho = " << fmt(cfg.rho) << "\n";
    os << "horizon = " << cfg.horizon << "\n";
    os << "warmup = " << cfg.warmup << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "window = " << cfg.window << "\n";
    if (cfg.arrival_override) os << "arrival_override = " << join(*cfg.arrival_override) << "\n";
    if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
    os << "\n[verdicts]\n";
    os << "slope_threshold = " << fmt(cfg.slope_threshold) << "\n";
    os << "split_tolerance = " << fmt(cfg.split_tolerance) << "\n";
    os << "delta_admit = " << fmt(cfg.delta_admit) << "\n";
    os << "disturbance_tol = " << fmt(cfg.disturbance_tol) << "\n";
    return os.str();
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.links == 0) fail(0, "links", "must be at least 1");
    if (cfg.links > 64) fail(0, "links", "at most 64 links are supported");
    if (cfg.channel.size() != cfg.links)
        fail(0, "channel", "expected " + std::to_string(cfg.links) + " entries, got " + std::to_string(cfg.channel.size()));
    for (double c : cfg.channel)
        if (!(c > 0.0 && c <= 1.0)) fail(0, "channel", "every mean must lie in (0, 1]");
    for (const auto& [a, b] : cfg.conflicts) {
        if (a >= cfg.links || b >= cfg.links) fail(0, "conflicts", "pair references a link id >= links");
        if (a == b) fail(0, "conflicts", "a link cannot conflict with itself");
    }
    std::set<std::size_t> act(cfg.active.begin(), cfg.active.end());
    if (act.size() != cfg.active.size()) fail(0, "active", "duplicate link id");
    for (auto l : cfg.active)
        if (l >= cfg.links) fail(0, "active", "link id " + std::to_string(l) + " >= links");
    if (cfg.new_link) {
        if (*cfg.new_link >= cfg.links) fail(0, "new_link", "link id >= links");
        if (act.count(*cfg.new_link)) fail(0, "new_link", "already in the active set");
    }
    if (act.size() + (cfg.new_link ? 1 : 0) > 20) fail(0, "active", "at most 20 served links can be enumerated");
    if (!(cfg.x_bar > 0.0 && cfg.x_bar <= 1.0)) fail(0, "x_bar", "must lie in (0, 1]");
    if (!(cfg.epsilon > 0.0)) fail(0, "epsilon", "must be positive");
    if (!(cfg.u > 0.0)) fail(0, "u", "must be positive");
    if (cfg.u_n && !(*cfg.u_n > 0.0)) fail(0, "u_n", "must be positive");
    if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) fail(0, "rho", "must lie strictly between 0 and 1");
    if (cfg.horizon <= 0) fail(0, "horizon", "must be positive");
    if (cfg.warmup < 0 || cfg.warmup >= cfg.horizon) fail(0, "warmup", "must satisfy 0 <= warmup < horizon");
    if (cfg.window <= 0) fail(0, "window", "must be positive");
    if (cfg.arrival_override) {
        const auto& x = *cfg.arrival_override;
        if (x.size() != cfg.links) fail(0, "arrival_override", "expected one rate per link");
        for (std::size_t l = 0; l < x.size(); ++l) {
            if (!(x[l] >= 0.0 && x[l] <= 1.0)) fail(0, "arrival_override", "rates must lie in [0, 1]");
            const bool served = act.count(l) || (cfg.new_link && *cfg.new_link == l);
            if (x[l] > 0.0 && !served) fail(0, "arrival_override", "positive rate on a link that is not served");
        }
    }
    if (!(cfg.slope_threshold > 0.0)) fail(0, "slope_threshold", "must be positive");
    if (!(cfg.split_tolerance > 0.0)) fail(0, "split_tolerance", "must be positive");
    if (!(cfg.delta_admit > 0.0)) fail(0, "delta_admit", "must be positive");
    if (!(cfg.disturbance_tol > 0.0)) fail(0, "disturbance_tol", "must be positive");
}

} // namespace wadmit
