#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "twinimg/params.hpp"
#include "twinimg/states.hpp"

namespace twinimg {

/// One sweep axis over a named parameter.
struct AxisSpec {
  std::string name;  // alpha | gamma | eta | n_eff | n_mean | n_dark
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  bool log = false;
};

/// A full sweep: one or two axes over a base point, per state.
struct SweepSpec {
  std::vector<AxisSpec> axes;
  std::vector<StateKind> states{StateKind::coherent, StateKind::tmsv, StateKind::twin_fock};
  PointSpec base;
  std::string out = "-";       // file path, or "-" for stdout
  std::string format = "csv";  // csv | json
  int threads = 0;             // <= 0: hardware concurrency
};

/// Grid values of an axis; count = 1 degenerates to {min}, endpoints exact.
std::vector<double> axis_values(const AxisSpec& axis);

/// Built-in sweep presets: fig4, fig5, fig6, figS7.
SweepSpec preset_spec(const std::string& name);

/// Overlays values from a JSON sweep file onto spec.
void apply_config_file(SweepSpec& spec, const std::string& path);

/// All rows in deterministic grid order (axis 0 major, axis 1, then states).
std::vector<ResultRow> sweep_rows(const SweepSpec& spec);

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_rows_json(std::ostream& os, const SweepSpec& spec, const std::vector<ResultRow>& rows);
std::string spec_metadata_json(const SweepSpec& spec);

/// Runs the sweep and writes the table (plus a .meta.json sidecar next to
/// CSV files). Returns the number of rows written.
std::size_t run_sweep(const SweepSpec& spec);

}  // namespace twinimg
