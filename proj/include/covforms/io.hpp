#pragma once

/// @file io.hpp
/// Columnar text formats for cochains and structure fields, and the
/// flow-trace CSV. All numbers are written with shortest round-trip
/// precision so identical states produce byte-identical files.
///
/// Cochain dump: lines "degree cell fiber value" with cells in the grid's
/// canonical order; zero entries are written too, so files are
/// position-independent but complete.
/// Field dump:  lines "vertex row col value".
/// Trace CSV:   header "step,time,F,grad_norm,residual_deg_0..n".

#include <iosfwd>
#include <string>

#include "covforms/cochain.hpp"
#include "covforms/grid.hpp"
#include "covforms/structures.hpp"
#include "covforms/variational.hpp"

namespace covforms {

std::string format_double(double x);

void write_graded_cochain(std::ostream& out, const GradedCochain& g);
GradedCochain read_graded_cochain(std::istream& in, const TorusGrid& grid, int rank);

void write_jfield(std::ostream& out, const JField& j);
JField read_jfield(std::istream& in, const TorusGrid& grid, int n);

void write_two_form_field(std::ostream& out, const TwoFormField& f);

void write_trace_csv(std::ostream& out, const FlowTrace& trace, int dim);

}  // namespace covforms
