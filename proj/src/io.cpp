#include "covforms/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace covforms {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_graded_cochain(std::ostream& out, const GradedCochain& g) {
    out << "# degree cell fiber value\n";
    for (int k = 0; k <= g.dim(); ++k) {
        if (!g.has(k)) continue;
        const Cochain& c = g.at(k);
        for (Index id = 0; id < c.num_cells(); ++id)
            for (int i = 0; i < c.rank(); ++i)
                out << k << ' ' << id << ' ' << i << ' ' << format_double(c.values()(i, id))
                    << '\n';
    }
}

GradedCochain read_graded_cochain(std::istream& in, const TorusGrid& grid, int rank) {
    GradedCochain g(grid.dim());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int degree, fiber;
        Index cell;
        double value;
        if (!(ss >> degree >> cell >> fiber >> value))
            throw std::runtime_error("cochain file line " + std::to_string(lineno) +
                                     ": expected 'degree cell fiber value'");
        if (degree < 0 || degree > grid.dim() || cell < 0 || cell >= grid.num_cells(degree) ||
            fiber < 0 || fiber >= rank)
            throw std::runtime_error("cochain file line " + std::to_string(lineno) +
                                     ": index out of range");
        if (!g.has(degree)) g.set(Cochain(degree, Eigen::MatrixXd::Zero(rank, grid.num_cells(degree))));
        g.at(degree).values()(fiber, cell) = value;
    }
    return g;
}

void write_jfield(std::ostream& out, const JField& j) {
    out << "# vertex row col value\n";
    int n = j.dim();
    for (Index v = 0; v < j.num_vertices(); ++v)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                out << v << ' ' << r << ' ' << c << ' ' << format_double(j.values[v](r, c)) << '\n';
}

JField read_jfield(std::istream& in, const TorusGrid& grid, int n) {
    JField j;
    j.values.assign(grid.num_vertices(), Eigen::MatrixXd::Zero(n, n));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Index v;
        int r, c;
        double value;
        if (!(ss >> v >> r >> c >> value))
            throw std::runtime_error("field file line " + std::to_string(lineno) +
                                     ": expected 'vertex row col value'");
        if (v < 0 || v >= grid.num_vertices() || r < 0 || r >= n || c < 0 || c >= n)
            throw std::runtime_error("field file line " + std::to_string(lineno) +
                                     ": index out of range");
        j.values[v](r, c) = value;
    }
    return j;
}

void write_two_form_field(std::ostream& out, const TwoFormField& f) {
    out << "# vertex row col value\n";
    for (Index v = 0; v < f.num_vertices(); ++v)
        for (int i = 0; i < f.dim(); ++i)
            for (int j = i + 1; j < f.dim(); ++j)
                out << v << ' ' << i << ' ' << j << ' ' << format_double(f.entry(v, i, j)) << '\n';
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace, int dim) {
    out << "step,time,F,grad_norm";
    for (int l = 0; l <= dim; ++l) out << ",residual_deg_" << l;
    out << '\n';
    for (std::size_t s = 0; s < trace.size(); ++s) {
        out << s << ',' << format_double(trace.times[s]) << ','
            << format_double(trace.F_values[s]) << ',' << format_double(trace.gradient_norms[s]);
        for (int l = 0; l <= dim; ++l) out << ',' << format_double(trace.residual_by_degree[s](l));
        out << '\n';
    }
}

}  // namespace covforms
