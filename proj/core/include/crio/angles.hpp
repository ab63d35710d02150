#pragma once

#include <string>
#include <string_view>

namespace crio {

/// Reduces an angle into [0, 2 pi).
double wrap_angle(double a);

/// Distance on the circle of circumference 2 pi.
double angle_distance(double a, double b);

/// Parses decimal radians ("0.7", "-1e-3") or rational multiples of pi ("pi", "-pi/2",
/// "3pi/4", "3*pi/4", "0.5pi"). Throws std::invalid_argument on anything else.
double parse_angle(std::string_view text);

/// Writes multiples of pi/8 exactly ("0", "pi/4", "3pi/2") and anything else as a
/// decimal with nine places.
std::string format_angle(double a);

}  // namespace crio
