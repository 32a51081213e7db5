#pragma once

// Output writers: comma-separated value files with full double precision and
// a key = value run report.

#include <string>
#include <utility>
#include <vector>

#include "tsvar/error.hpp"
#include "tsvar/report.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

struct IoError : Error {
    using Error::Error;
};

/// Format with %.17g (round-trips a double exactly).
std::string format_double(double v);

/// Columns t,u,u_delta; the last row has no forward difference quotient and
/// leaves the third field blank.
void write_solution_csv(const std::string& path, const TimeScaleMesh& mesh,
                        const GridFunction& u);

/// Columns iter,energy,grad_norm,step.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

/// Columns index,arclen,energy.
void write_path_csv(const std::string& path, const std::vector<double>& arclength,
                    const std::vector<double>& energies);

/// Ordered key = value lines; values stored preformatted.
class ReportWriter {
public:
    void add(const std::string& key, double value);
    void add(const std::string& key, int value);
    void add(const std::string& key, std::size_t value);
    void add(const std::string& key, bool value);
    void add(const std::string& key, const std::string& value);
    void save(const std::string& path) const;
    const std::vector<std::pair<std::string, std::string>>& rows() const {
        return rows_;
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

/// Gnuplot helper next to the CSV files; extra plots are included for runs
/// that produced a path profile or an iteration trace.
void write_plot_script(const std::string& path, bool with_path, bool with_trace);

}  // namespace tsvar
