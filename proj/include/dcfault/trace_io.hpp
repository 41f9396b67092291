#pragma once

#include <filesystem>
#include <iosfwd>

#include "dcfault/dsp.hpp"
#include "dcfault/transient.hpp"

namespace dcfault {

/// CSV with header `t_s,i_a`, one row per sample, full double precision.
void write_trace_csv(std::ostream& out, const DischargeTrace& trace);
/// Rejects a wrong header, fewer than two rows or non-uniform timestamps (MalformedInput).
[[nodiscard]] DischargeTrace read_trace_csv(std::istream& in);

/// Little-endian binary: fs as float64 followed by the samples as float64. t0 is not stored.
void write_trace_binary(std::ostream& out, const DischargeTrace& trace);
[[nodiscard]] DischargeTrace read_trace_binary(std::istream& in);

/// Picks the format from the extension: `.csv` is text, anything else binary.
void save_trace(const std::filesystem::path& path, const DischargeTrace& trace);
/// Sniffs the content: a leading `t_s` header means CSV, otherwise binary.
[[nodiscard]] DischargeTrace load_trace(const std::filesystem::path& path);

/// CSV with header `t_s,i_peak_a`.
void write_peaks_csv(std::ostream& out, const PeakSeries& peaks);

}  // namespace dcfault
