#pragma once

// Long-format CSV outputs. Reals are written with 17 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

#include "oulab/estimation.hpp"
#include "oulab/fourier.hpp"
#include "oulab/model.hpp"
#include "oulab/spectral.hpp"

namespace oulab::csv {

std::string format_real(double v);

void write_grid(std::ostream& os, const GridSignal& g);        // x,value
void write_fourier(std::ostream& os, const FourierSignal& s);  // k,c,d (row 0 = c0, 0)
void write_spectrum(std::ostream& os, const ModeSpectrum& s);  // k,sigma,omega (row 0 = A_0, 0)
void write_samples(std::ostream& os, const SampleSet& set);    // sample_id,x,value | sample_id,k,c,d
void write_frames(std::ostream& os, const std::vector<Frame>& frames);  // t,x,value
void write_experiment(std::ostream& os, const ConsistencyTable& t);     // n,trial,sup_error,...
void write_summary(std::ostream& os, const ConsistencyTable& t);        // n,mean_error,sd_error

/// Parses a samples CSV in either form. The half period is not stored in the
/// file and is taken from the caller. Throws ConfigError on malformed input.
SampleSet read_samples(std::istream& is, double half_period);
FourierSignal read_fourier(std::istream& is, double half_period);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace oulab::csv
