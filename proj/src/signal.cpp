#include "shiftig/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "shiftig/error.hpp"

namespace shiftig {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> default_lead_names(std::size_t leads) {
  if (leads == 3) return {"I", "II", "III"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < leads; ++i) names.push_back("L" + std::to_string(i + 1));
  return names;
}

LeadTimeMatrix::LeadTimeMatrix(Matrix data, std::vector<std::string> lead_names,
                               double sample_rate_hz)
    : data_(std::move(data)),
      lead_names_(std::move(lead_names)),
      sample_rate_hz_(sample_rate_hz) {
  if (data_.rows() < 1 || data_.cols() < 2) {
    throw Error(ErrorCode::ShapeMismatch, "segment needs C >= 1 leads and T >= 2 samples");
  }
  if (lead_names_.size() != data_.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "lead name count does not match lead count");
  }
  if (!(std::isfinite(sample_rate_hz_) && sample_rate_hz_ > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "sample rate must be positive and finite");
  }
  if (!data_.all_finite()) {
    throw Error(ErrorCode::NonFiniteInput, "segment contains NaN or inf");
  }
}

LeadTimeMatrix::LeadTimeMatrix(Matrix data, double sample_rate_hz)
    : LeadTimeMatrix(data, default_lead_names(data.rows()), sample_rate_hz) {}

std::size_t LeadTimeMatrix::lead_index(const std::string& label) const {
  auto it = std::find(lead_names_.begin(), lead_names_.end(), label);
  if (it == lead_names_.end()) {
    throw Error(ErrorCode::UnknownLead, "no lead named '" + label + "'");
  }
  return static_cast<std::size_t>(it - lead_names_.begin());
}

NormalizeResult normalize(const LeadTimeMatrix& x) {
  Matrix out(x.leads(), x.samples());
  std::vector<std::size_t> constant;
  for (std::size_t i = 0; i < x.leads(); ++i) {
    auto src = x.lead(i);
    auto [lo_it, hi_it] = std::minmax_element(src.begin(), src.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    auto dst = out.row(i);
    if (range == 0.0) {
      constant.push_back(i);
      continue;
    }
    for (std::size_t t = 0; t < src.size(); ++t) dst[t] = (src[t] - lo) / range;
  }
  return {LeadTimeMatrix(std::move(out), x.lead_names(), x.sample_rate_hz()),
          std::move(constant)};
}

DeltaMatrix delta(const LeadTimeMatrix& x, const LeadTimeMatrix& x_base) {
  if (x.shape() != x_base.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "target and baseline shapes differ");
  }
  if (x.sample_rate_hz() != x_base.sample_rate_hz()) {
    throw Error(ErrorCode::ShapeMismatch, "target and baseline sample rates differ");
  }
  Matrix d(x.leads(), x.samples());
  auto a = x.data().flat();
  auto b = x_base.data().flat();
  auto o = d.flat();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = a[k] - b[k];
  return {std::move(d)};
}

LeadTimeMatrix rotate(const LeadTimeMatrix& x, long k) {
  const auto n = static_cast<long>(x.samples());
  const long shift = ((k % n) + n) % n;
  Matrix out(x.leads(), x.samples());
  for (std::size_t i = 0; i < x.leads(); ++i) {
    auto src = x.lead(i);
    auto dst = out.row(i);
    for (long t = 0; t < n; ++t) dst[static_cast<std::size_t>((t + shift) % n)] = src[t];
  }
  return LeadTimeMatrix(std::move(out), x.lead_names(), x.sample_rate_hz());
}

LeadTimeMatrix read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, "empty CSV");
  }
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.front() != "time") {
    throw Error(ErrorCode::ParseError, "CSV header must be time,<lead1>,...");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  const std::size_t c = names.size();

  std::vector<double> times;
  std::vector<std::vector<double>> leads(c);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != c + 1) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(c + 1) +
                      " fields");
    }
    const double t = parse_double(fields[0], line_no);
    if (!times.empty() && !(t > times.back())) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": time must be strictly increasing");
    }
    times.push_back(t);
    for (std::size_t i = 0; i < c; ++i) leads[i].push_back(parse_double(fields[i + 1], line_no));
  }
  if (times.size() < 2) {
    throw Error(ErrorCode::ShapeMismatch, "CSV needs at least two samples");
  }

  std::vector<double> rates;
  rates.reserve(times.size() - 1);
  for (std::size_t k = 1; k < times.size(); ++k) rates.push_back(1.0 / (times[k] - times[k - 1]));
  std::sort(rates.begin(), rates.end());
  const std::size_t mid = rates.size() / 2;
  double rate = rates.size() % 2 == 1 ? rates[mid] : 0.5 * (rates[mid - 1] + rates[mid]);
  // Decimal time stamps carry rounding noise; snap to micro-hertz.
  rate = std::round(rate * 1e6) / 1e6;

  return LeadTimeMatrix(Matrix::from_rows(leads), std::move(names), rate);
}

LeadTimeMatrix read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InputFileNotFound, "cannot open " + path);
  }
  return read_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const LeadTimeMatrix& x) {
  out << "time";
  for (const auto& name : x.lead_names()) out << ',' << name;
  out << '\n';
  for (std::size_t t = 0; t < x.samples(); ++t) {
    out << format_double(static_cast<double>(t) / x.sample_rate_hz());
    for (std::size_t i = 0; i < x.leads(); ++i) out << ',' << format_double(x.data()(i, t));
    out << '\n';
  }
}

}  // namespace shiftig
