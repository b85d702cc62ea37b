#pragma once

#include <cmath>
#include <stdexcept>

namespace tricell {

struct Vec3 {
    double x{}, y{}, z{};

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

// Orthorhombic periodic box, lengths in reduced LJ units.
struct Box {
    Vec3 L{};

    Box() = default;
    Box(double lx, double ly, double lz) : L{lx, ly, lz} {
        if (!(lx > 0.0 && ly > 0.0 && lz > 0.0))
            throw std::invalid_argument("Box: all lengths must be positive");
    }

    double volume() const { return L.x * L.y * L.z; }
};

namespace detail {
// Maps v into [-L/2, L/2). floor(v/L + 1/2) picks the image; the half-box
// tie v = -L/2 stays put, v = +L/2 maps to -L/2.
inline double min_image_axis(double v, double len) {
    return v - len * std::floor(v / len + 0.5);
}

// Maps v into [0, L). Guards against the rounding case where v + L == L
// for tiny negative v.
inline double wrap_axis(double v, double len) {
    double w = v - len * std::floor(v / len);
    if (w >= len) w -= len;
    if (w < 0.0) w = 0.0;
    return w;
}
} // namespace detail

inline Vec3 minimum_image(const Vec3& dr, const Box& box) {
    return {detail::min_image_axis(dr.x, box.L.x),
            detail::min_image_axis(dr.y, box.L.y),
            detail::min_image_axis(dr.z, box.L.z)};
}

inline Vec3 wrap_position(const Vec3& p, const Box& box) {
    return {detail::wrap_axis(p.x, box.L.x),
            detail::wrap_axis(p.y, box.L.y),
            detail::wrap_axis(p.z, box.L.z)};
}

} // namespace tricell
