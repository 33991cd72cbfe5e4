#pragma once

#include <cmath>
#include <limits>

namespace vlnav {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Wraps an angle to (-pi, pi].
inline double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

/// Robot pose in world coordinates. theta is kept in (-pi, pi].
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Pose() = default;
    Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

    Vec2 position() const { return {x, y}; }
    void set_theta(double t) { theta = normalize_angle(t); }
};

struct Segment {
    Vec2 a;
    Vec2 b;
};

/// Distance from point p to segment s.
inline double point_segment_distance(const Vec2& p, const Segment& s) {
    const Vec2 ab = s.b - s.a;
    const double len_sq = ab.norm_sq();
    if (len_sq <= 0.0) return distance(p, s.a);
    double t = (p - s.a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, s.a + ab * t);
}

/// True if segments pq and s properly intersect or touch.
inline bool segments_intersect(const Vec2& p, const Vec2& q, const Segment& s) {
    const Vec2 r = q - p;
    const Vec2 d = s.b - s.a;
    const double denom = r.cross(d);
    const Vec2 ap = s.a - p;
    if (denom == 0.0) {
        if (r.cross(ap) != 0.0) return false;  // parallel, not collinear
        // collinear: project onto the dominant axis
        double t0, t1;
        if (std::abs(r.x) >= std::abs(r.y)) {
            if (r.x == 0.0) return distance(p, s.a) == 0.0;
            t0 = (s.a.x - p.x) / r.x;
            t1 = (s.b.x - p.x) / r.x;
        } else {
            t0 = (s.a.y - p.y) / r.y;
            t1 = (s.b.y - p.y) / r.y;
        }
        if (t0 > t1) std::swap(t0, t1);
        return t0 <= 1.0 && t1 >= 0.0;
    }
    const double t = ap.cross(d) / denom;
    const double u = ap.cross(r) / denom;
    return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

/// Parametric distance along a ray (origin, unit dir) to the first hit on a
/// segment, or +inf when there is no hit in (0, inf).
inline double ray_segment_hit(const Vec2& origin, const Vec2& dir, const Segment& s) {
    const double inf = std::numeric_limits<double>::infinity();
    const Vec2 d = s.b - s.a;
    const double denom = dir.cross(d);
    if (denom == 0.0) return inf;  // parallel: grazing hits are ignored
    const Vec2 ao = s.a - origin;
    const double t = ao.cross(d) / denom;
    const double u = ao.cross(dir) / denom;
    if (t <= 0.0 || u < 0.0 || u > 1.0) return inf;
    return t;
}

/// Parametric distance along a ray to the first hit on a circle, or +inf.
inline double ray_circle_hit(const Vec2& origin, const Vec2& dir, const Vec2& center, double radius) {
    const double inf = std::numeric_limits<double>::infinity();
    const Vec2 oc = origin - center;
    const double b = 2.0 * dir.dot(oc);
    const double c = oc.norm_sq() - radius * radius;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return inf;
    const double sq = std::sqrt(disc);
    const double t0 = (-b - sq) / 2.0;
    if (t0 > 0.0) return t0;
    const double t1 = (-b + sq) / 2.0;
    if (t1 > 0.0) return t1;  // origin inside the circle
    return inf;
}

}  // namespace vlnav
