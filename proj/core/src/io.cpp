#include "surfdiff/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace surfdiff {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_dump(std::ostream& out, const Field& field, int n) {
  if (n < 2) throw std::invalid_argument("write_grid_dump: n must be at least 2");
  const Provenance& prov = field.provenance();
  const double period = field.period();
  out << "# field=" << prov.family << " R=" << format_g17(period) << " n=" << n
      << " seed=" << prov.seed << "\n";
  const double h = period / n;
  for (int j = 0; j < n; ++j) {
    const double y = j * h;
    for (int i = 0; i < n; ++i) {
      const double x = i * h;
      const FieldJet jet = field.jet({x, y});
      out << format_g17(x) << ' ' << format_g17(y) << ' ' << format_g17(jet.h) << ' '
          << format_g17(jet.grad.x) << ' ' << format_g17(jet.grad.y) << "\n";
    }
  }
}

namespace {

constexpr const char* kTensorHeader =
    "seed,R,n,Z,D11,D12,D22,lower11,lower22,upper11,upper22,det_residual,converged";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  return cells;
}

double cell_double(const std::string& s, int line_no) {
  // from_chars does not accept "nan"/"inf" spellings uniformly; strtod does.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw std::runtime_error("tensor csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void write_tensor_csv(std::ostream& out, const std::vector<TensorRow>& rows) {
  out << kTensorHeader << "\n";
  for (const TensorRow& r : rows) {
    out << r.seed << ',' << format_g17(r.R) << ',' << r.subdivisions << ',' << format_g17(r.Z)
        << ',' << format_g17(r.D.m00) << ',' << format_g17(r.D.m01) << ',' << format_g17(r.D.m11)
        << ',' << format_g17(r.lower11) << ',' << format_g17(r.lower22) << ','
        << format_g17(r.upper11) << ',' << format_g17(r.upper22) << ','
        << format_g17(r.det_residual) << ',' << (r.converged ? "true" : "false") << "\n";
  }
}

std::vector<TensorRow> read_tensor_csv(std::istream& in) {
  std::vector<TensorRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kTensorHeader)
        throw std::runtime_error("tensor csv: unexpected header '" + line + "'");
      continue;
    }
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != 13)
      throw std::runtime_error("tensor csv line " + std::to_string(line_no) + ": expected 13 columns");
    TensorRow r;
    std::uint64_t seed = 0;
    const auto [p, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), seed);
    if (ec != std::errc{} || p != cells[0].data() + cells[0].size())
      throw std::runtime_error("tensor csv line " + std::to_string(line_no) + ": bad seed");
    r.seed = seed;
    r.R = cell_double(cells[1], line_no);
    r.subdivisions = static_cast<int>(cell_double(cells[2], line_no));
    r.Z = cell_double(cells[3], line_no);
    r.D.m00 = cell_double(cells[4], line_no);
    r.D.m01 = cell_double(cells[5], line_no);
    r.D.m10 = r.D.m01;
    r.D.m11 = cell_double(cells[6], line_no);
    r.lower11 = cell_double(cells[7], line_no);
    r.lower22 = cell_double(cells[8], line_no);
    r.upper11 = cell_double(cells[9], line_no);
    r.upper22 = cell_double(cells[10], line_no);
    r.det_residual = cell_double(cells[11], line_no);
    if (cells[12] == "true") r.converged = true;
    else if (cells[12] == "false") r.converged = false;
    else if (cells[12] == "1") r.converged = true;
    else if (cells[12] == "0") r.converged = false;
    else throw std::runtime_error("tensor csv line " + std::to_string(line_no) + ": bad converged flag");
    rows.push_back(r);
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const EnsembleSummary& summary) {
  out << "R,count,meanD11,stdD11,meanD22,stdD22,meanD12,meanZ,area_scaling_ref\n";
  for (const EnsembleGroup& g : summary.groups) {
    out << format_g17(g.R) << ',' << g.count << ',' << format_g17(g.mean_D11) << ','
        << format_g17(g.std_D11) << ',' << format_g17(g.mean_D22) << ',' << format_g17(g.std_D22)
        << ',' << format_g17(g.mean_D12) << ',' << format_g17(g.mean_Z) << ','
        << format_g17(g.area_scaling_ref) << "\n";
  }
}

void write_bounds_csv(std::ostream& out, std::uint64_t seed, double R, int subdivisions,
                      const CellBounds& bounds) {
  out << "seed,R,n,Z,lower11,lower12,lower22,upper11,upper12,upper22\n";
  out << seed << ',' << format_g17(R) << ',' << subdivisions << ',' << format_g17(bounds.Z) << ','
      << format_g17(bounds.lower.m00) << ',' << format_g17(bounds.lower.m01) << ','
      << format_g17(bounds.lower.m11) << ',' << format_g17(bounds.upper.m00) << ','
      << format_g17(bounds.upper.m01) << ',' << format_g17(bounds.upper.m11) << "\n";
}

void write_mcmc_csv(std::ostream& out, const SimulationPlan& plan, const TrajectoryStats& stats) {
  out << "seed,dt,T,delta,D11,D12,D22,se11,se12,se22\n";
  out << plan.seed << ',' << format_g17(plan.dt) << ',' << format_g17(plan.T) << ','
      << format_g17(plan.delta) << ',' << format_g17(stats.D.m00) << ','
      << format_g17(stats.D.m01) << ',' << format_g17(stats.D.m11) << ','
      << format_g17(stats.standard_error.m00) << ',' << format_g17(stats.standard_error.m01)
      << ',' << format_g17(stats.standard_error.m11) << "\n";
}

void write_msd(std::ostream& out, const TrajectoryStats& stats) {
  out << "lag,msd\n";
  for (const auto& [lag, value] : stats.msd) {
    out << format_g17(lag) << ',' << format_g17(value) << "\n";
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace surfdiff
