#include "dcfault/trace_io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "dcfault/error.hpp"

namespace dcfault {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedInput, what); }

double parse_double(std::string_view text, std::size_t line_no) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        malformed("line " + std::to_string(line_no) + ": not a number '" + std::string(text) + "'");
    }
    return value;
}

void put_f64(std::ostream& out, double v) {
    static_assert(sizeof(double) == 8);
    auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> buf{};
    for (auto& b : buf) {
        b = static_cast<char>(bits & 0xffu);
        bits >>= 8;
    }
    out.write(buf.data(), buf.size());
}

bool get_f64(std::istream& in, double& v) {
    std::array<unsigned char, 8> buf{};
    if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) return false;
    std::uint64_t bits = 0;
    for (std::size_t i = 8; i-- > 0;) bits = (bits << 8) | buf[i];
    v = std::bit_cast<double>(bits);
    return true;
}

}  // namespace

void write_trace_csv(std::ostream& out, const DischargeTrace& trace) {
    out << "t_s,i_a\n";
    for (std::size_t n = 0; n < trace.size(); ++n) {
        fmt::print(out, "{:.17g},{:.17g}\n", trace.time(n), trace.samples[n]);
    }
}

DischargeTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) malformed("empty trace file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t_s,i_a") malformed("expected header 't_s,i_a', got '" + line + "'");

    std::vector<double> times;
    std::vector<double> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) malformed("line " + std::to_string(line_no) + ": expected two columns");
        times.push_back(parse_double(std::string_view(line).substr(0, comma), line_no));
        samples.push_back(parse_double(std::string_view(line).substr(comma + 1), line_no));
    }
    if (times.size() < 2) malformed("trace needs at least two samples");

    const double span = times.back() - times.front();
    const double step = span / static_cast<double>(times.size() - 1);
    if (!(step > 0.0)) malformed("timestamps must increase");
    for (std::size_t n = 1; n < times.size(); ++n) {
        const double gap = times[n] - times[n - 1];
        if (std::abs(gap - step) > 1e-6 * step) {
            malformed("non-uniform timestamps near t=" + fmt::format("{:.9g}", times[n]));
        }
    }
    double fs = 1.0 / step;
    // Timestamps printed as t0 + n/fs round-trip to an integral rate.
    if (const double whole = std::round(fs); whole > 0.0 && std::abs(fs - whole) <= 1e-9 * whole) fs = whole;
    return DischargeTrace{std::move(samples), fs, times.front()};
}

void write_trace_binary(std::ostream& out, const DischargeTrace& trace) {
    put_f64(out, trace.fs);
    for (double s : trace.samples) put_f64(out, s);
}

DischargeTrace read_trace_binary(std::istream& in) {
    DischargeTrace trace;
    if (!get_f64(in, trace.fs)) malformed("binary trace shorter than its 8-byte header");
    if (!std::isfinite(trace.fs) || trace.fs <= 0.0) malformed("binary trace has invalid sampling rate");
    double v = 0.0;
    while (get_f64(in, v)) trace.samples.push_back(v);
    if (in.gcount() != 0) malformed("binary trace length is not a multiple of 8 bytes");
    if (trace.samples.empty()) malformed("binary trace has no samples");
    for (double s : trace.samples) {
        if (!std::isfinite(s)) malformed("binary trace contains non-finite samples");
    }
    return trace;
}

void save_trace(const std::filesystem::path& path, const DischargeTrace& trace) {
    const bool csv = path.extension() == ".csv";
    std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
    if (!out) malformed("cannot open '" + path.string() + "' for writing");
    if (csv) {
        write_trace_csv(out, trace);
    } else {
        write_trace_binary(out, trace);
    }
    if (!out) malformed("write to '" + path.string() + "' failed");
}

DischargeTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in) malformed("cannot open '" + path.string() + "'");
    std::array<char, 3> head{};
    in.read(head.data(), head.size());
    const bool csv = in.gcount() == 3 && std::memcmp(head.data(), "t_s", 3) == 0;
    in.clear();
    in.seekg(0);
    return csv ? read_trace_csv(in) : read_trace_binary(in);
}

void write_peaks_csv(std::ostream& out, const PeakSeries& peaks) {
    out << "t_s,i_peak_a\n";
    for (const auto& p : peaks.points) fmt::print(out, "{:.17g},{:.17g}\n", p.t, p.magnitude);
}

}  // namespace dcfault
