#include "tsvar/io.hpp"

#include <cstdio>
#include <fstream>

namespace tsvar {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep '\n' endings
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_solution_csv(const std::string& path, const TimeScaleMesh& mesh,
                        const GridFunction& u) {
    if (u.size() != mesh.node_count())
        throw IoError("solution size does not match the mesh");
    const std::vector<double> ud = delta_derivative(mesh, u);
    auto out = open_out(path);
    out << "t,u,u_delta\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        out << format_double(mesh.node(i)) << ',' << format_double(u[i]) << ',';
        if (i + 1 < u.size()) out << format_double(ud[i]);
        out << '\n';
    }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
    auto out = open_out(path);
    out << "iter,energy,grad_norm,step\n";
    for (const auto& row : trace)
        out << row.iter << ',' << format_double(row.energy) << ','
            << format_double(row.grad_norm) << ',' << format_double(row.step)
            << '\n';
}

void write_path_csv(const std::string& path, const std::vector<double>& arclength,
                    const std::vector<double>& energies) {
    if (arclength.size() != energies.size())
        throw IoError("path arclength and energies differ in size");
    auto out = open_out(path);
    out << "index,arclen,energy\n";
    for (std::size_t i = 0; i < energies.size(); ++i)
        out << i << ',' << format_double(arclength[i]) << ','
            << format_double(energies[i]) << '\n';
}

void ReportWriter::add(const std::string& key, double value) {
    rows_.emplace_back(key, format_double(value));
}
void ReportWriter::add(const std::string& key, int value) {
    rows_.emplace_back(key, std::to_string(value));
}
void ReportWriter::add(const std::string& key, std::size_t value) {
    rows_.emplace_back(key, std::to_string(value));
}
void ReportWriter::add(const std::string& key, bool value) {
    rows_.emplace_back(key, value ? "true" : "false");
}
void ReportWriter::add(const std::string& key, const std::string& value) {
    rows_.emplace_back(key, value);
}

void ReportWriter::save(const std::string& path) const {
    auto out = open_out(path);
    for (const auto& [k, v] : rows_) out << k << " = " << v << '\n';
}

void write_plot_script(const std::string& path, bool with_path, bool with_trace) {
    auto out = open_out(path);
    out << "# run: gnuplot -p plot.gp\n"
           "set datafile separator ','\n"
           "set grid\n"
           "set key left top\n"
           "set xlabel 't'\n"
           "set ylabel 'u'\n"
           "plot 'solution.csv' using 1:2 with linespoints pt 7 ps 0.6 "
           "title 'solution'\n";
    if (with_path)
        out << "pause -1 'press enter for the path energy profile'\n"
               "set xlabel 'arc length'\n"
               "set ylabel 'energy'\n"
               "plot 'path.csv' using 2:3 with linespoints pt 7 "
               "title 'path energy'\n";
    if (with_trace)
        out << "pause -1 'press enter for the convergence trace'\n"
               "set xlabel 'iteration'\n"
               "set ylabel 'gradient sup-norm'\n"
               "set logscale y\n"
               "plot 'trace.csv' using 1:3 with lines title 'grad norm'\n";
}

}  // namespace tsvar
