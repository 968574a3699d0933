#include "cvdisc/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace cvdisc {

void SweepRequest::validate() const {
  if (n_states < 2) throw DomainError("sweep needs at least two states");
  if (!(alpha_sq_min >= 0) || !std::isfinite(alpha_sq_min)) throw DomainError("alpha2-min must be >= 0");
  if (!(alpha_sq_max > alpha_sq_min) || !std::isfinite(alpha_sq_max))
    throw DomainError("alpha2-max must exceed alpha2-min");
  if (steps < 2) throw DomainError("steps must be at least 2");
  for (const auto& c : columns)
    if (std::find(std::begin(kSweepColumns), std::end(kSweepColumns), c) == std::end(kSweepColumns))
      throw DomainError("unknown column: " + c);
}

double SweepRequest::alpha_sq_at(int i) const {
  if (i == steps - 1) return alpha_sq_max;
  return alpha_sq_min + (alpha_sq_max - alpha_sq_min) * static_cast<double>(i) / (steps - 1);
}

std::vector<SweepRow> sweep(const SweepRequest& request) {
  request.validate();
  std::vector<SweepRow> rows(static_cast<std::size_t>(request.steps));
  for (int i = 0; i < request.steps; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.alpha_sq = request.alpha_sq_at(i);
    const auto profile = coefficients(EnsembleSpec<double>(request.n_states, row.alpha_sq), request.tol);
    row.report = ir_report(profile);
    row.info = info_report(profile);
  }
  return rows;
}

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (value == 0) value = 0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

namespace {

std::string column_value(const SweepRow& row, std::string_view col) {
  const auto& r = row.report;
  if (col == "alpha_sq") return format_number(row.alpha_sq);
  if (col == "p_s") return format_number(r.p_s);
  if (col == "p_c_med") return format_number(r.p_c_med);
  if (col == "p_c_med_beta") return format_number(r.p_c_med_beta);
  if (col == "p_c_ir") return format_number(r.p_c_ir);
  if (col == "fidelity") return format_number(r.fidelity);
  if (col == "infidelity") return format_number(r.infidelity);
  if (col == "error_bound") return format_number(r.error_bound);
  if (col == "i_ud") return format_number(row.info.i_ud);
  if (col == "i_ir") return format_number(row.info.i_ir);
  if (col == "gain") return format_number(row.info.gain);
  if (col == "failure_dim") return std::to_string(r.failure_dim);
  throw DomainError("unknown column: " + std::string(col));
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepRequest& request, const std::vector<SweepRow>& rows) {
  std::vector<std::string_view> cols;
  if (request.columns.empty())
    cols.assign(std::begin(kSweepColumns), std::end(kSweepColumns));
  else
    for (const auto& c : request.columns) cols.emplace_back(c);

  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << column_value(row, cols[i]);
    out << '\n';
  }
}

std::string format_report(int n_states, double alpha_sq, const DiscriminationReport<double>& r,
                          const InfoReport<double>& info) {
  std::ostringstream os;
  auto line = [&](std::string_view key, double v) { os << key << " = " << format_number(v) << '\n'; };
  os << "n_states = " << n_states << '\n';
  line("alpha_sq", alpha_sq);
  line("p_s", r.p_s);
  line("p_c_med", r.p_c_med);
  line("p_c_med_beta", r.p_c_med_beta);
  line("p_c_ir", r.p_c_ir);
  line("fidelity", r.fidelity);
  line("infidelity", r.infidelity);
  line("error_bound", r.error_bound);
  line("confidence_success", r.confidence_success);
  line("confidence_failure", r.confidence_failure);
  os << "failure_dim = " << r.failure_dim << '\n';
  os << "full_separation = " << (r.full_separation ? "true" : "false") << '\n';
  line("i_ud", info.i_ud);
  line("i_ir", info.i_ir);
  line("gain", info.gain);
  line("h_fail", info.h_fail);
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

}  // namespace cvdisc
