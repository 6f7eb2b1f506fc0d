#include "oulab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "oulab/config.hpp"
#include "oulab/error.hpp"

namespace oulab::csv {

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_grid(std::ostream& os, const GridSignal& g)
{
    os << "x,value\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        os << format_real(g.node(i)) << ',' << format_real(g.values[i]) << '\n';
}

void write_fourier(std::ostream& os, const FourierSignal& s)
{
    os << "k,c,d\n";
    os << "0," << format_real(s.c0()) << ",0\n";
    for (std::size_t k = 1; k <= s.mode_count(); ++k)
        os << k << ',' << format_real(s.c(k)) << ',' << format_real(s.d(k)) << '\n';
}

void write_spectrum(std::ostream& os, const ModeSpectrum& s)
{
    os << "k,sigma,omega\n";
    os << "0," << format_real(s.sigma0) << ",0\n";
    for (std::size_t k = 1; k <= s.size(); ++k)
        os << k << ',' << format_real(s.sigma[k - 1]) << ',' << format_real(s.omega[k - 1]) << '\n';
}

void write_samples(std::ostream& os, const SampleSet& set)
{
    if (set.form == ObservationForm::grid) {
        os << "sample_id,x,value\n";
        for (std::size_t i = 0; i < set.grid.size(); ++i) {
            const auto& g = set.grid[i];
            for (std::size_t j = 0; j < g.size(); ++j)
                os << i << ',' << format_real(g.node(j)) << ',' << format_real(g.values[j]) << '\n';
        }
        return;
    }
    os << "sample_id,k,c,d\n";
    for (std::size_t i = 0; i < set.fourier.size(); ++i) {
        const auto& s = set.fourier[i];
        os << i << ",0," << format_real(s.c0()) << ",0\n";
        for (std::size_t k = 1; k <= s.mode_count(); ++k)
            os << i << ',' << k << ',' << format_real(s.c(k)) << ',' << format_real(s.d(k)) << '\n';
    }
}

void write_frames(std::ostream& os, const std::vector<Frame>& frames)
{
    os << "t,x,value\n";
    for (const auto& f : frames) {
        const std::string t = format_real(f.t);
        for (std::size_t j = 0; j < f.values.size(); ++j)
            os << t << ',' << format_real(f.values.node(j)) << ',' << format_real(f.values.values[j])
               << '\n';
    }
}

void write_experiment(std::ostream& os, const ConsistencyTable& t)
{
    os << "n,trial,sup_error,c0_error,max_mode_error\n";
    for (const auto& r : t.trials)
        os << r.n << ',' << r.trial << ',' << format_real(r.sup_error) << ','
           << format_real(r.c0_error) << ',' << format_real(r.max_mode_error) << '\n';
}

void write_summary(std::ostream& os, const ConsistencyTable& t)
{
    os << "n,mean_error,sd_error\n";
    for (const auto& s : t.summary)
        os << s.n << ',' << format_real(s.mean_error) << ',' << format_real(s.sd_error) << '\n';
}

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lines;
};

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Table read_table(std::istream& is)
{
    Table t;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_row(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ConfigError("expected " + std::to_string(t.header.size()) + " columns, got " +
                                  std::to_string(cells.size()),
                              lineno);
        t.rows.push_back(std::move(cells));
        t.lines.push_back(lineno);
    }
    if (t.header.empty()) throw ConfigError("empty CSV input");
    return t;
}

double cell_real(const std::string& s, int line)
{
    try {
        return parse_real(s);
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line);
    }
}

std::size_t cell_index(const std::string& s, int line)
{
    try {
        return static_cast<std::size_t>(parse_u64(s));
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line);
    }
}

FourierSignal assemble_fourier(const std::map<std::size_t, std::pair<double, double>>& coeffs,
                               double half_period, const std::string& what)
{
    if (!coeffs.count(0)) throw ConfigError(what + " lacks the k = 0 row");
    const std::size_t K = coeffs.rbegin()->first;
    if (coeffs.size() != K + 1) throw ConfigError(what + " has missing mode rows");
    FourierSignal s(half_period, K);
    s.set_c0(coeffs.at(0).first);
    for (std::size_t k = 1; k <= K; ++k) s.set_mode(k, coeffs.at(k).first, coeffs.at(k).second);
    return s;
}

}  // namespace

SampleSet read_samples(std::istream& is, double half_period)
{
    const Table t = read_table(is);
    SampleSet set;
    const std::vector<std::string> grid_header{"sample_id", "x", "value"};
    const std::vector<std::string> fourier_header{"sample_id", "k", "c", "d"};

    if (t.header == grid_header) {
        set.form = ObservationForm::grid;
        struct Point {
            double x, value;
            int line;
        };
        std::map<std::size_t, std::vector<Point>> by_id;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const int ln = t.lines[r];
            by_id[cell_index(t.rows[r][0], ln)].push_back(
                {cell_real(t.rows[r][1], ln), cell_real(t.rows[r][2], ln), ln});
        }
        if (by_id.empty()) throw ConfigError("samples CSV has no rows");
        const std::size_t G = by_id.begin()->second.size();
        for (auto& [id, pts] : by_id) {
            if (pts.size() != G)
                throw ConfigError("sample " + std::to_string(id) + " has " +
                                  std::to_string(pts.size()) + " points, expected " +
                                  std::to_string(G));
            GridSignal g{half_period, std::vector<double>(G)};
            for (std::size_t j = 0; j < G; ++j) {
                if (std::fabs(pts[j].x - g.node(j)) > 1e-9 * half_period)
                    throw ConfigError("sample " + std::to_string(id) + " point " +
                                          std::to_string(j) + " is not on the uniform grid of half period " +
                                          format_real(half_period),
                                      pts[j].line);
                g.values[j] = pts[j].value;
            }
            set.grid.push_back(std::move(g));
        }
    } else if (t.header == fourier_header) {
        set.form = ObservationForm::fourier;
        std::map<std::size_t, std::map<std::size_t, std::pair<double, double>>> by_id;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const int ln = t.lines[r];
            by_id[cell_index(t.rows[r][0], ln)][cell_index(t.rows[r][1], ln)] = {
                cell_real(t.rows[r][2], ln), cell_real(t.rows[r][3], ln)};
        }
        if (by_id.empty()) throw ConfigError("samples CSV has no rows");
        for (const auto& [id, coeffs] : by_id)
            set.fourier.push_back(assemble_fourier(coeffs, half_period, "sample " + std::to_string(id)));
    } else {
        throw ConfigError("samples CSV header must be 'sample_id,x,value' or 'sample_id,k,c,d'", 1);
    }
    set.eta.assign(set.form == ObservationForm::grid ? set.grid.size() : set.fourier.size(), 0.0);
    return set;
}

FourierSignal read_fourier(std::istream& is, double half_period)
{
    const Table t = read_table(is);
    if (t.header != std::vector<std::string>{"k", "c", "d"})
        throw ConfigError("Fourier CSV header must be 'k,c,d'", 1);
    std::map<std::size_t, std::pair<double, double>> coeffs;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int ln = t.lines[r];
        coeffs[cell_index(t.rows[r][0], ln)] = {cell_real(t.rows[r][1], ln), cell_real(t.rows[r][2], ln)};
    }
    return assemble_fourier(coeffs, half_period, "Fourier CSV");
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw Error("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

}  // namespace oulab::csv
