#pragma once

#include <string>
#include <utility>

#include "dptda/diagram.hpp"
#include "dptda/experiments.hpp"
#include "dptda/geometry.hpp"
#include "dptda/mechanism.hpp"

namespace dptda {

// Shortest decimal that round-trips the double exactly is not guaranteed by
// printf, so emissions use 17 significant digits everywhere.
std::string format_full(double value);

// One point per row, comma-separated numeric columns, optional header row.
// Throws std::invalid_argument("no points") for an empty file and
// std::runtime_error naming the line for malformed rows.
PointCloud read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const PointCloud& cloud);

// Diagram JSON document:
//   { "ell": L, "cap": S, "diagrams": [ { "dim": q,
//     "pairs": [ {"birth": b, "death": d-or-"inf"} ] } ] }
void write_diagram_json(const std::string& path, const DiagramTuple& tuple, double cap);
std::pair<DiagramTuple, double> read_diagram_json(const std::string& path);

// trace.csv: iter,utility,accepted,db_dim0,db_dim1,...
void write_trace_csv(const std::string& path, const MechanismTrace& trace);

// results.csv: axis,value,rep,db0,db1,total
void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const std::string& axis_name);

// Log-log quantile band (2.5%..97.5%) with the median line and a slope -1
// reference.
void write_sweep_svg(const std::string& path, const SweepResult& result,
                     const std::string& axis_name);

}  // namespace dptda
