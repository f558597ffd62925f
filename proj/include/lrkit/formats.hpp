#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lrkit/collection.hpp"
#include "lrkit/soup.hpp"

namespace lrkit {

/// Run-length form of a local knot vector: strictly increasing values and
/// their multiplicities.
struct LocalBSplineRecord {
  std::vector<double> knots;
  std::vector<int> multiplicities;

  static LocalBSplineRecord from_local(const LocalKnots& t);
  /// Validation error unless the values increase and the multiplicities
  /// sum to degree + 2.
  LocalKnots to_local(int degree) const;

  friend bool operator==(const LocalBSplineRecord&, const LocalBSplineRecord&) = default;
};

struct LRSplineDocument {
  SplineType type = SplineType::LRBSpline;
  SplineCollection collection;
};

/// Field-for-field equality, doubles compared bitwise.
bool same_document(const LRSplineDocument& a, const LRSplineDocument& b);

/// Throws Validation naming the first failing record.
void validate_document(const LRSplineDocument& doc);

enum class FloatEncoding { Hex, Decimal };

/// Line-oriented text format (.lrsp):
///
///   LRSP 1
///   type <SplineType>
///   independence <Independence>
///   parametric <d>
///   geometric <g>
///   rational <0|1>
///   degrees <p_1> ... <p_d>
///   encoding <hex|decimal>
///   records <n>
///   record <gamma as p/q>
///   knots <v_1> ... <v_k> : <m_1> ... <m_k>     (once per direction)
///   coef <c_1> ... <c_g>
///   weight <w>                                 (rational documents only)
///   end
///
/// Lines starting with '#' and blank lines are ignored.
std::string write_lr(const LRSplineDocument& doc, FloatEncoding encoding = FloatEncoding::Hex);

/// Parse errors carry the line number; invariant violations are Validation
/// errors naming the record.
LRSplineDocument read_lr(std::string_view text);

enum class StlMode { Ascii, Binary };

/// Binary: 80-byte header (the soup name, zero padded), little-endian
/// uint32 count, 50-byte records of float32 normal, three float32
/// vertices and the uint16 attribute. Stored normals are written as given.
std::string write_stl(const TriangleSoup& soup, StlMode mode);

/// Binary when the size equals 84 + 50 * count, ASCII when the text starts
/// with "solid", otherwise a parse error. Normals are kept as stored; use
/// effective_normal for the orientation of a (0,0,0) normal.
TriangleSoup read_stl(std::string_view bytes);
bool is_binary_stl(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace lrkit
