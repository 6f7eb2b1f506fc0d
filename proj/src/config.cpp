#include "oulab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "oulab/error.hpp"

namespace oulab {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_factor(std::string_view f)
{
    f = trim(f);
    double sign = 1.0;
    while (!f.empty() && (f.front() == '-' || f.front() == '+')) {
        if (f.front() == '-') sign = -sign;
        f = trim(f.substr(1));
    }
    if (f == "pi") return sign * std::numbers::pi;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v))
        throw ConfigError("not a real number: '" + std::string(f) + "'");
    return sign * v;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool parse_bool(std::string_view s)
{
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<E> values)
{
    for (E v : values)
        if (s == to_string(v)) return v;
    throw ConfigError("unknown value '" + std::string(s) + "'");
}

std::size_t parse_index(std::string_view s)
{
    const auto v = parse_u64(s);
    return static_cast<std::size_t>(v);
}

}  // namespace

double parse_real(std::string_view s)
{
    s = trim(s);
    if (s.empty()) throw ConfigError("empty value");
    // Left-to-right product/quotient chain.
    double v = 1.0;
    char op = '*';
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        const bool end = i == s.size();
        if (!end && s[i] != '*' && s[i] != '/') continue;
        const double f = parse_factor(s.substr(start, i - start));
        v = op == '*' ? v * f : v / f;
        if (!end) op = s[i];
        start = i + 1;
    }
    if (!std::isfinite(v)) throw ConfigError("value is not finite: '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s)
{
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("not a non-negative integer: '" + std::string(s) + "'");
    return v;
}

std::vector<double> parse_real_list(std::string_view s)
{
    std::vector<double> out;
    for (auto item : split(s, ',')) out.push_back(parse_real(item));
    return out;
}

std::vector<std::size_t> parse_count_list(std::string_view s)
{
    std::vector<std::size_t> out;
    for (auto item : split(s, ',')) out.push_back(parse_index(item));
    return out;
}

std::vector<double> parse_times(std::string_view spec)
{
    spec = trim(spec);
    if (spec.find(':') != std::string_view::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw ConfigError("time range must be start:stop:count");
        const double a = parse_real(parts[0]), b = parse_real(parts[1]);
        const std::size_t count = parse_index(parts[2]);
        if (count < 1) throw ConfigError("time range needs count >= 1");
        std::vector<double> t(count);
        for (std::size_t i = 0; i < count; ++i)
            t[i] = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
        return t;
    }
    return parse_real_list(spec);
}

const char* to_string(Kernel k) { return k == Kernel::mean_reverting ? "mean_reverting" : "growth"; }

const char* to_string(FrameNoise f)
{
    switch (f) {
    case FrameNoise::none: return "none";
    case FrameNoise::path: return "path";
    case FrameNoise::iid: return "iid";
    }
    return "none";
}

const char* to_string(ObservationForm f) { return f == ObservationForm::grid ? "grid" : "fourier"; }
const char* to_string(NoiseSampler s) { return s == NoiseSampler::exact ? "exact" : "series"; }

const char* to_string(SeriesVariant v)
{
    return v == SeriesVariant::variance_matched ? "variance_matched" : "paper_faithful";
}

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    ScenarioConfig& sc = cfg.scenario;
    RunParams& run = cfg.run;

    double half_period = std::numbers::pi;
    double c0 = 0.0;
    std::map<std::size_t, double> cmodes, dmodes, acoef;
    std::set<std::string> seen;

    std::string section = "run";
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        try {
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError("unterminated section header");
                section = std::string(trim(line.substr(1, line.size() - 2)));
                if (section != "theta" && section != "operator" && section != "noise" &&
                    section != "run")
                    throw ConfigError("unknown section [" + section + "]");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ConfigError("expected key = value");
            const std::string key(trim(line.substr(0, eq)));
            const std::string_view value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key");
            if (value.empty()) throw ConfigError("missing value for '" + key + "'");
            if (!seen.insert(section + "." + key).second)
                throw ConfigError("duplicate key '" + key + "' in [" + section + "]");

            auto unknown = [&] { return ConfigError("unknown key '" + key + "' in [" + section + "]"); };

            if (section == "theta") {
                if (key == "l")
                    half_period = parse_real(value);
                else if (key == "c0")
                    c0 = parse_real(value);
                else if (key.starts_with("c.") || key.starts_with("d.")) {
                    const std::size_t k = parse_index(std::string_view(key).substr(2));
                    if (k < 1) throw ConfigError("mode index must be >= 1");
                    (key[0] == 'c' ? cmodes : dmodes)[k] = parse_real(value);
                } else
                    throw unknown();
            } else if (section == "operator") {
                if (!key.starts_with("A.")) throw unknown();
                acoef[parse_index(std::string_view(key).substr(2))] = parse_real(value);
            } else if (section == "noise") {
                if (key == "sigma")
                    sc.noise.sigma = parse_real(value);
                else if (key == "kernel")
                    sc.noise.kernel = parse_enum(value, {Kernel::mean_reverting, Kernel::growth});
                else if (key == "series_terms")
                    sc.noise.series_terms = parse_index(value);
                else if (key == "sampler")
                    sc.sampler = parse_enum(value, {NoiseSampler::exact, NoiseSampler::series});
                else if (key == "series_variant")
                    sc.series_variant = parse_enum(
                        value, {SeriesVariant::variance_matched, SeriesVariant::paper_faithful});
                else
                    throw unknown();
            } else {
                if (key == "t0")
                    sc.t0 = parse_real(value);
                else if (key == "n")
                    sc.n = parse_index(value);
                else if (key == "K")
                    sc.K = parse_index(value);
                else if (key == "G")
                    sc.G = parse_index(value);
                else if (key == "seed") {
                    sc.seed = parse_u64(value);
                    cfg.seed_given = true;
                } else if (key == "quasi")
                    sc.quasi = parse_bool(value);
                else if (key == "quasi_base")
                    sc.quasi_base = parse_u64(value);
                else if (key == "observation")
                    sc.form = parse_enum(value, {ObservationForm::grid, ObservationForm::fourier});
                else if (key == "inverse_cap")
                    sc.inverse_cap = parse_real(value);
                else if (key == "value_cap")
                    sc.value_cap = parse_real(value);
                else if (key == "times") {
                    parse_times(value);
                    run.times = std::string(value);
                } else if (key == "frame_noise")
                    run.frame_noise = parse_enum(value, {FrameNoise::none, FrameNoise::path, FrameNoise::iid});
                else if (key == "trials")
                    run.trials = parse_index(value);
                else if (key == "n_grid")
                    run.n_grid = parse_count_list(value);
                else if (key == "sigma_sweep")
                    run.sigma_sweep = parse_real_list(value);
                else if (key == "epsilon")
                    run.epsilon = parse_real(value);
                else if (key == "window")
                    run.window = parse_index(value);
                else if (key == "n_max")
                    run.n_max = parse_index(value);
                else
                    throw unknown();
            }
        } catch (const ConfigError& e) {
            if (e.line() > 0) throw;
            throw ConfigError(e.what(), lineno);
        } catch (const DomainError& e) {
            throw ConfigError(e.what(), lineno);
        }
    }

    try {
        if (acoef.empty()) throw ConfigError("operator needs at least A.0");
        std::vector<double> a(acoef.rbegin()->first + 1, 0.0);
        for (const auto& [n, v] : acoef) a[n] = v;
        sc.op = OperatorSpec(std::move(a));

        std::size_t max_mode = 0;
        if (!cmodes.empty()) max_mode = std::max(max_mode, cmodes.rbegin()->first);
        if (!dmodes.empty()) max_mode = std::max(max_mode, dmodes.rbegin()->first);
        if (max_mode > sc.K)
            throw ConfigError("theta has mode " + std::to_string(max_mode) + " above K = " +
                              std::to_string(sc.K));
        FourierSignal theta(half_period, sc.K);
        theta.set_c0(c0);
        for (const auto& [k, v] : cmodes) theta.set_mode(k, v, theta.d(k));
        for (const auto& [k, v] : dmodes) theta.set_mode(k, theta.c(k), v);
        sc.theta = std::move(theta);
        sc.noise.a0 = sc.op.a0();
        sc.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        if (auto preset = preset_text(path)) return parse_config(*preset);
        throw ConfigError("cannot open config '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& c)
{
    const ScenarioConfig& sc = c.scenario;
    std::ostringstream o;
    o << "[theta]\n";
    o << "l = " << fmt(sc.theta.half_period()) << '\n';
    o << "c0 = " << fmt(sc.theta.c0()) << '\n';
    for (std::size_t k = 1; k <= sc.theta.mode_count(); ++k) {
        if (sc.theta.c(k) != 0.0) o << "c." << k << " = " << fmt(sc.theta.c(k)) << '\n';
        if (sc.theta.d(k) != 0.0) o << "d." << k << " = " << fmt(sc.theta.d(k)) << '\n';
    }
    o << "[operator]\n";
    const auto& a = sc.op.coefficients();
    for (std::size_t n = 0; n < a.size(); ++n) o << "A." << n << " = " << fmt(a[n]) << '\n';
    o << "[noise]\n";
    o << "sigma = " << fmt(sc.noise.sigma) << '\n';
    o << "kernel = " << to_string(sc.noise.kernel) << '\n';
    o << "series_terms = " << sc.noise.series_terms << '\n';
    o << "sampler = " << to_string(sc.sampler) << '\n';
    o << "series_variant = " << to_string(sc.series_variant) << '\n';
    o << "[run]\n";
    o << "t0 = " << fmt(sc.t0) << '\n';
    o << "n = " << sc.n << '\n';
    o << "K = " << sc.K << '\n';
    o << "G = " << sc.G << '\n';
    if (c.seed_given) o << "seed = " << sc.seed << '\n';
    o << "quasi = " << (sc.quasi ? "true" : "false") << '\n';
    o << "quasi_base = " << sc.quasi_base << '\n';
    o << "observation = " << to_string(sc.form) << '\n';
    o << "inverse_cap = " << fmt(sc.inverse_cap) << '\n';
    o << "value_cap = " << fmt(sc.value_cap) << '\n';
    o << "times = " << c.run.times << '\n';
    o << "frame_noise = " << to_string(c.run.frame_noise) << '\n';
    o << "trials = " << c.run.trials << '\n';
    o << "n_grid = ";
    for (std::size_t i = 0; i < c.run.n_grid.size(); ++i) o << (i ? ", " : "") << c.run.n_grid[i];
    o << '\n';
    if (!c.run.sigma_sweep.empty()) {
        o << "sigma_sweep = ";
        for (std::size_t i = 0; i < c.run.sigma_sweep.size(); ++i)
            o << (i ? ", " : "") << fmt(c.run.sigma_sweep[i]);
        o << '\n';
    }
    o << "epsilon = " << fmt(c.run.epsilon) << '\n';
    o << "window = " << c.run.window << '\n';
    o << "n_max = " << c.run.n_max << '\n';
    return o.str();
}

}  // namespace oulab
