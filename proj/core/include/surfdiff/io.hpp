#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "surfdiff/analysis.hpp"
#include "surfdiff/cell_solver.hpp"
#include "surfdiff/field.hpp"
#include "surfdiff/sde.hpp"

namespace surfdiff {

// Decimal form that round-trips a double (17 significant digits).
std::string format_g17(double v);

// Header line plus n^2 rows "x y h dhx dhy" over the period cell, raster
// order (y outer, x inner).
void write_grid_dump(std::ostream& out, const Field& field, int n);

void write_tensor_csv(std::ostream& out, const std::vector<TensorRow>& rows);
std::vector<TensorRow> read_tensor_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const EnsembleSummary& summary);

void write_bounds_csv(std::ostream& out, std::uint64_t seed, double R, int subdivisions,
                      const CellBounds& bounds);

void write_mcmc_csv(std::ostream& out, const SimulationPlan& plan, const TrajectoryStats& stats);
void write_msd(std::ostream& out, const TrajectoryStats& stats);

// Whole-file helpers; both throw on open or write failure.
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace surfdiff
