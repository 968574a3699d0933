#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cvdisc/discrim.hpp"
#include "cvdisc/infotheory.hpp"

namespace cvdisc {

class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kSweepColumns[] = {
    "alpha_sq", "p_s",   "p_c_med",  "p_c_med_beta", "p_c_ir", "fidelity",   "infidelity",
    "error_bound", "i_ud", "i_ir", "gain", "failure_dim"};

struct SweepRequest {
  int n_states = 3;
  double alpha_sq_min = 0;
  double alpha_sq_max = 1;
  int steps = 2;
  std::vector<std::string> columns;  // empty = all, in canonical order
  Tolerances tol{};

  void validate() const;
  double alpha_sq_at(int i) const;
};

struct SweepRow {
  double alpha_sq = 0;
  DiscriminationReport<double> report;
  InfoReport<double> info;
};

std::vector<SweepRow> sweep(const SweepRequest& request);

// Locale-independent text with `digits` significant digits ("nan" for NaN,
// no negative zero).
std::string format_number(double value, int digits = 12);

void write_sweep_csv(std::ostream& out, const SweepRequest& request, const std::vector<SweepRow>& rows);

// Human-readable key = value listing of every scalar, 12 significant digits.
std::string format_report(int n_states, double alpha_sq, const DiscriminationReport<double>& report,
                          const InfoReport<double>& info);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace cvdisc
