#pragma once

#include <string>

#include "capkit/capacity.hpp"
#include "capkit/content.hpp"
#include "capkit/operators.hpp"
#include "capkit/space.hpp"

// Text formats. Spaces, sets and certificates are JSON documents; sequences,
// measures and point functions are whitespace-separated tables.
namespace capkit::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// {"points":[{"id","mass","coords"?}], "metric":"euclidean"|"explicit", "matrix"?}
// The matrix is either full (n rows of n) or the lower triangle with diagonal
// (row i has i+1 entries).
Space parse_space(const std::string& text);
// Coordinates present -> euclidean, otherwise explicit lower triangle.
std::string dump_space(const Space& s);
// True when the document declares a euclidean metric.
bool declares_euclidean(const std::string& text);

// JSON list of ids.
PointSet parse_set(const Space& s, const std::string& text);
std::string dump_set(const Space& s, const PointSet& e);
// Either a JSON list or the brace shorthand {a,b}.
PointSet parse_set_arg(const Space& s, const std::string& arg);

// Lines "scale point value"; the tail slot uses scale "tail".
std::string dump_sequence(const Space& s, const ScaleSequence& f);
ScaleSequence parse_sequence(const Space& s, const std::string& text);

// Lines "point value".
std::string dump_point_values(const Space& s, const std::vector<double>& v);
std::vector<double> parse_point_values(const Space& s, const std::string& text);

std::string dump_certificate(const Space& s, const CapacityCertificate& c);
CapacityCertificate parse_certificate(const Space& s, const std::string& text);

std::string dump_cover(const Space& s, const Cover& c);

// "inf" and "infinity" accepted.
double parse_real(const std::string& text);
std::string format_real(double v);

}  // namespace capkit::io
