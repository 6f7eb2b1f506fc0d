#include "oulab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oulab/config.hpp"
#include "oulab/csv.hpp"
#include "oulab/error.hpp"
#include "oulab/estimation.hpp"
#include "oulab/verify.hpp"

#ifndef OULAB_VERSION
#define OULAB_VERSION "0.0.0"
#endif

namespace oulab::cli {

std::string version() { return OULAB_VERSION; }

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Options {
    std::string command;
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<std::string> times;
    std::optional<std::string> noise;
    std::optional<std::size_t> trials;
    std::optional<std::string> n_grid;
    bool quasi = false;
    // estimate
    std::optional<std::string> samples_path;
    bool infinite = false;
    std::optional<double> epsilon;
    std::optional<std::size_t> window;
    std::optional<std::size_t> n_max;
    // verify
    std::size_t draws = 100000;
};

class Run {
public:
    Run(Options opts, std::ostream& out, std::ostream& err)
        : o_(std::move(opts)), out_(out), err_(err), start_(std::chrono::steady_clock::now())
    {
    }

    int execute();

private:
    void resolve();
    std::string path(const std::string& name) const { return (fs::path(o_.out) / name).string(); }
    void emit(const std::string& name, const std::string& content)
    {
        csv::write_file_atomic(path(name), content);
        outputs_.push_back(name);
    }
    void write_manifest();

    int spectrum();
    int evolve();
    int sample();
    int estimate();
    int verify();
    int convergence();

    Options o_;
    std::ostream& out_;
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_;
    RunConfig cfg_;
    std::vector<std::string> outputs_;
    json extra_ = json::object();
};

bool looks_like_manifest(const std::string& p)
{
    std::ifstream in(p);
    char c = 0;
    while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
    }
    return in && c == '{';
}

void Run::resolve()
{
    if (o_.config.empty()) throw ConfigError("--config is required");

    if (looks_like_manifest(o_.config)) {
        json m;
        try {
            std::ifstream in(o_.config);
            m = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("unreadable manifest: ") + e.what());
        }
        if (!m.contains("command") || !m.contains("config"))
            throw ConfigError("manifest lacks 'command' or 'config'");
        if (m["command"].get<std::string>() != o_.command)
            throw ConfigError("manifest was written by '" + m["command"].get<std::string>() +
                              "', not '" + o_.command + "'");
        cfg_ = parse_config(m["config"].get<std::string>());
        const json& p = m.value("params", json::object());
        if (p.contains("samples")) o_.samples_path = p["samples"].get<std::string>();
        if (p.contains("infinite")) o_.infinite = p["infinite"].get<bool>();
        if (p.contains("draws")) o_.draws = p["draws"].get<std::size_t>();
        return;
    }

    cfg_ = load_config(o_.config);
    ScenarioConfig& sc = cfg_.scenario;
    try {
        if (o_.n) sc.n = *o_.n;
        if (o_.quasi) sc.quasi = true;
        if (o_.times) {
            parse_times(*o_.times);
            cfg_.run.times = *o_.times;
        }
        if (o_.noise) {
            if (*o_.noise == "none") cfg_.run.frame_noise = FrameNoise::none;
            else if (*o_.noise == "path") cfg_.run.frame_noise = FrameNoise::path;
            else if (*o_.noise == "iid") cfg_.run.frame_noise = FrameNoise::iid;
            else throw ConfigError("--noise must be none, path or iid");
        }
        if (o_.trials) cfg_.run.trials = *o_.trials;
        if (o_.n_grid) cfg_.run.n_grid = parse_count_list(*o_.n_grid);
        if (o_.epsilon) cfg_.run.epsilon = *o_.epsilon;
        if (o_.window) cfg_.run.window = *o_.window;
        if (o_.n_max) cfg_.run.n_max = *o_.n_max;
        if (o_.seed) {
            sc.seed = *o_.seed;
            cfg_.seed_given = true;
        }
        if (!cfg_.seed_given) {
            std::random_device rd;
            sc.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            cfg_.seed_given = true;
        }
        sc.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

void Run::write_manifest()
{
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json params = extra_;
    if (o_.samples_path) params["samples"] = *o_.samples_path;
    if (o_.command == "estimate") params["infinite"] = o_.infinite;
    if (o_.command == "verify") params["draws"] = o_.draws;
    json m = {
        {"command", o_.command},
        {"version", version()},
        {"config", to_config_text(cfg_)},
        {"seed", cfg_.scenario.seed},
        {"quasi", cfg_.scenario.quasi},
        {"params", params},
        {"outputs", outputs_},
        {"duration_seconds", secs},
    };
    csv::write_file_atomic(path(o_.command + ".manifest.json"), m.dump(2) + "\n");
}

int Run::execute()
{
    resolve();
    int code = 0;
    if (o_.command == "spectrum") code = spectrum();
    else if (o_.command == "evolve") code = evolve();
    else if (o_.command == "sample") code = sample();
    else if (o_.command == "estimate") code = estimate();
    else if (o_.command == "verify") code = verify();
    else if (o_.command == "convergence") code = convergence();
    else throw ConfigError("unknown command '" + o_.command + "'");
    write_manifest();
    return code;
}

int Run::spectrum()
{
    const auto& sc = cfg_.scenario;
    std::ostringstream os;
    csv::write_spectrum(os, mode_spectrum(sc.op, sc.K, sc.theta.half_period()));
    emit("spectrum.csv", os.str());
    const StabilityReport r = stability_report(sc.op, sc.K, sc.theta.half_period(), sc.t0, sc.inverse_cap);
    extra_["forward_unstable"] = r.forward_unstable;
    extra_["inverse_ill_conditioned"] = r.inverse_ill_conditioned;
    out_ << "spectrum: " << sc.K << " modes, forward " << (r.forward_unstable ? "unstable" : "stable")
         << ", inverse at t0 " << (r.inverse_ill_conditioned ? "ill-conditioned" : "well-conditioned")
         << '\n';
    return ok;
}

int Run::evolve()
{
    const auto& sc = cfg_.scenario;
    const std::vector<double> times = parse_times(cfg_.run.times);
    const auto frames = evolve_frames(sc, times, cfg_.run.frame_noise, sc.root_source());
    std::ostringstream os;
    csv::write_frames(os, frames);
    emit("frames.csv", os.str());
    out_ << "evolve: " << frames.size() << " frames\n";
    return ok;
}

int Run::sample()
{
    const SampleSet set = sample_batch(cfg_.scenario);
    std::ostringstream os;
    csv::write_samples(os, set);
    emit("samples.csv", os.str());
    std::ostringstream eta;
    eta << "sample_id,eta\n";
    for (std::size_t i = 0; i < set.eta.size(); ++i) eta << i << ',' << csv::format_real(set.eta[i]) << '\n';
    emit("eta.csv", eta.str());
    out_ << "sample: " << set.size() << " transformed signals\n";
    return ok;
}

int Run::estimate()
{
    const ScenarioConfig& sc = cfg_.scenario;
    const InverseOptions inv = estimation_inverse_options(sc.inverse_cap);
    std::ostringstream report;
    report << "sigma,n_used,sup_error,c0_error,max_mode_error,amplification_max,converged\n";
    auto add_row = [&](double sigma, const EstimateReport& r, bool converged) {
        report << csv::format_real(sigma) << ',' << r.n_used << ',' << csv::format_real(r.sup_error)
               << ',' << csv::format_real(r.c0_error) << ',' << csv::format_real(r.max_mode_error)
               << ',' << csv::format_real(r.amplification_max) << ',' << (converged ? 1 : 0) << '\n';
    };
    auto warn_dropped = [&](const Estimate& e) {
        if (e.dropped_modes.empty()) return;
        err_ << "warning: " << e.dropped_modes.size()
             << " mode(s) exceed the inverse amplification cap and were set to zero:";
        for (auto k : e.dropped_modes) err_ << ' ' << k;
        err_ << '\n';
    };
    auto fourier_text = [](const FourierSignal& s) {
        std::ostringstream os;
        csv::write_fourier(os, s);
        return os.str();
    };

    int code = ok;
    if (o_.samples_path) {
        std::ifstream in(*o_.samples_path);
        if (!in) throw ConfigError("cannot open samples '" + *o_.samples_path + "'");
        SampleSet set = csv::read_samples(in, sc.theta.half_period());
        set.config = sc;
        const Estimate est = estimate_tn_detailed(set, sc.op, sc.t0, sc.K, inv);
        warn_dropped(est);
        emit("estimate.csv", fourier_text(est.signal));
        add_row(sc.noise.sigma, error_report(est, sc.theta), true);
    } else if (o_.infinite) {
        CauchyOptions co;
        co.epsilon = cfg_.run.epsilon;
        co.window = cfg_.run.window;
        co.n_max = cfg_.run.n_max;
        co.inverse = inv;
        const auto res = infinite_sample_estimate(scenario_stream(sc, sc.root_source()), sc.op,
                                                  sc.t0, sc.K, co);
        emit("estimate.csv", fourier_text(res.estimate));
        EstimateReport r = error_report(res.estimate, sc.theta);
        r.n_used = res.n_used;
        add_row(sc.noise.sigma, r, res.converged);
        out_ << "estimate: Cauchy criterion " << (res.converged ? "met" : "not met") << " at n = "
             << res.n_used << '\n';
        if (!res.converged) code = not_converged;
    } else {
        const std::vector<double> sigmas =
            cfg_.run.sigma_sweep.empty() ? std::vector<double>{sc.noise.sigma} : cfg_.run.sigma_sweep;
        const RandomSource root = sc.root_source();
        for (std::size_t j = 0; j < sigmas.size(); ++j) {
            ScenarioConfig c = sc;
            c.noise.sigma = sigmas[j];
            c.validate();
            const SampleSet set = sample_batch(c, root.substream(j));
            const Estimate est = estimate_tn_detailed(set, c.op, c.t0, c.K, inv);
            warn_dropped(est);
            const std::string name =
                cfg_.run.sigma_sweep.empty() ? "estimate.csv" : "estimate_" + std::to_string(j) + ".csv";
            emit(name, fourier_text(est.signal));
            add_row(sigmas[j], error_report(est, c.theta), true);
        }
    }
    emit("report.csv", report.str());
    out_ << "estimate: report written to " << path("report.csv") << '\n';
    return code;
}

int Run::verify()
{
    const auto& sc = cfg_.scenario;
    const auto checks = verify_moments(sc, o_.draws, default_covariance_pairs(sc.t0));
    std::ostringstream os;
    os << "check,s,t,analytic,empirical,std_error,pass\n";
    bool all = true;
    for (const auto& c : checks) {
        os << c.check << ',' << csv::format_real(c.s) << ',' << csv::format_real(c.t) << ','
           << csv::format_real(c.analytic) << ',' << csv::format_real(c.empirical) << ','
           << csv::format_real(c.std_error) << ',' << (c.pass ? 1 : 0) << '\n';
        all = all && c.pass;
    }
    emit("verification.csv", os.str());
    out_ << "verify: " << checks.size() << " checks, " << (all ? "all passed" : "FAILURES") << '\n';
    return all ? ok : check_failed;
}

int Run::convergence()
{
    const auto& sc = cfg_.scenario;
    const ConsistencyTable t = consistency_experiment(sc, cfg_.run.n_grid, cfg_.run.trials);
    std::ostringstream exp, sum;
    csv::write_experiment(exp, t);
    csv::write_summary(sum, t);
    emit("experiment.csv", exp.str());
    emit("summary.csv", sum.str());
    const std::string slope = t.slope ? csv::format_real(*t.slope) : "undefined";
    emit("summary.meta", "slope=" + slope + "\n");
    extra_["slope"] = slope;
    out_ << "convergence: slope=" << slope << '\n';
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Ornstein-Uhlenbeck channel simulation and signal estimation", "oulab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Scenario file, preset name (ex41, ex42, ex43) or run manifest")
            ->required();
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--seed", o.seed, "Random seed (drawn from entropy when omitted)");
        sub->add_flag("--quasi", o.quasi, "Use the quasi-random Gaussian sequence");
    };

    auto* spectrum = app.add_subcommand("spectrum", "Write the mode spectrum (sigma_k, omega_k)");
    common(spectrum);
    auto* evolve = app.add_subcommand("evolve", "Write frames of the evolving signal");
    common(evolve);
    evolve->add_option("--times", o.times, "start:stop:count or a comma list");
    evolve->add_option("--noise", o.noise, "none, path or iid");
    auto* sample = app.add_subcommand("sample", "Draw n transformed signals at t0");
    common(sample);
    sample->add_option("--n", o.n, "Sample size");
    auto* estimate = app.add_subcommand("estimate", "Estimate the useful signal");
    common(estimate);
    estimate->add_option("--samples", o.samples_path, "Samples CSV (simulated from the config when omitted)");
    estimate->add_option("--n", o.n, "Sample size when simulating");
    estimate->add_flag("--infinite", o.infinite, "Run the Cauchy-criterion infinite-sample surrogate");
    estimate->add_option("--epsilon", o.epsilon, "Cauchy threshold");
    estimate->add_option("--window", o.window, "Number of consecutive agreeing estimates");
    estimate->add_option("--n-max", o.n_max, "Sample budget for --infinite");
    auto* verify = app.add_subcommand("verify", "Monte Carlo check of the noise moments");
    common(verify);
    verify->add_option("--samples", o.draws, "Number of Monte Carlo draws");
    auto* convergence = app.add_subcommand("convergence", "Error of T_n against n");
    common(convergence);
    convergence->add_option("--n-grid", o.n_grid, "Ascending comma list of sample sizes");
    convergence->add_option("--trials", o.trials, "Trials per sample size");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
    o.command = app.get_subcommands().front()->get_name();

    try {
        return Run(o, out, err).execute();
    } catch (const ConfigError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return numeric_error;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return check_failed;
    }
}

}  // namespace oulab::cli
