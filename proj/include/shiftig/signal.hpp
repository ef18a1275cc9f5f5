#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "shiftig/matrix.hpp"

namespace shiftig {

// A C×T multi-lead segment. Rows are leads, columns are samples.
class LeadTimeMatrix {
 public:
  // Throws ShapeMismatch for C < 1, T < 2 or a wrong number of lead names,
  // NonFiniteInput for NaN/inf entries and InvalidConfig for a bad rate.
  LeadTimeMatrix(Matrix data, std::vector<std::string> lead_names, double sample_rate_hz);

  // Lead names default to I, II, III for three leads and L1..LC otherwise.
  LeadTimeMatrix(Matrix data, double sample_rate_hz);

  const Matrix& data() const { return data_; }
  const std::vector<std::string>& lead_names() const { return lead_names_; }
  double sample_rate_hz() const { return sample_rate_hz_; }

  std::size_t leads() const { return data_.rows(); }
  std::size_t samples() const { return data_.cols(); }
  Shape shape() const { return data_.shape(); }

  std::span<const double> lead(std::size_t i) const { return data_.row(i); }

  // Index of the lead with the given label; throws UnknownLead.
  std::size_t lead_index(const std::string& label) const;

  friend bool operator==(const LeadTimeMatrix&, const LeadTimeMatrix&) = default;

 private:
  Matrix data_;
  std::vector<std::string> lead_names_;
  double sample_rate_hz_;
};

std::vector<std::string> default_lead_names(std::size_t leads);

struct NormalizeResult {
  LeadTimeMatrix signal;
  // Leads that were constant and were mapped to zeros.
  std::vector<std::size_t> constant_leads;

  bool warning() const { return !constant_leads.empty(); }
};

// Per-lead min-max scaling to [0, 1]. Constant leads become all zeros.
NormalizeResult normalize(const LeadTimeMatrix& x);

// X - X', elementwise.
struct DeltaMatrix {
  Matrix data;
};

DeltaMatrix delta(const LeadTimeMatrix& x, const LeadTimeMatrix& x_base);

// out[i][n] = x[i][(n - k) mod T]: every lead delayed by k samples with wrap.
LeadTimeMatrix rotate(const LeadTimeMatrix& x, long k);

// CSV with header `time,<lead1>,...,<leadC>`; rate from the median of the
// reciprocal sample spacings.
LeadTimeMatrix read_csv(std::istream& in);
LeadTimeMatrix read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const LeadTimeMatrix& x);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace shiftig
