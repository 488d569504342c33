#include "gcpack/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "gcpack/errors.hpp"
#include "gcpack/tangency.hpp"

namespace gcp
{

namespace
{

using Complex = std::complex<double>;

Complex to_disk(Complex z)
{
    const Complex i(0.0, 1.0);
    return i * (z - i) / (z + i);
}

struct DiskCurve {
    bool is_line{false};
    Complex center;
    double radius{0.0};
    // line through a and b when is_line
    Complex a;
    Complex b;
};

DiskCurve circumcircle(Complex p, Complex q, Complex r)
{
    const double d = 2.0 * (p.real() * (q.imag() - r.imag()) + q.real() * (r.imag() - p.imag()) +
                            r.real() * (p.imag() - q.imag()));
    const double scale = std::max({std::abs(p), std::abs(q), std::abs(r), 1.0});
    if (std::abs(d) < 1e-12 * scale * scale) {
        return {true, {}, 0.0, p, r};
    }
    const double p2 = std::norm(p);
    const double q2 = std::norm(q);
    const double r2 = std::norm(r);
    const double ux = (p2 * (q.imag() - r.imag()) + q2 * (r.imag() - p.imag()) + r2 * (p.imag() - q.imag())) / d;
    const double uy = (p2 * (r.real() - q.real()) + q2 * (p.real() - r.real()) + r2 * (q.real() - p.real())) / d;
    const Complex c(ux, uy);
    return {false, c, std::abs(p - c), {}, {}};
}

DiskCurve map_curve(const EuclideanCircle<double>& circle)
{
    const Complex c = circle.center;
    const double rho = circle.radius;
    const Complex i(0.0, 1.0);
    // a circle through -i maps to a line; pick sample points away from it
    std::array<Complex, 4> samples = {c + rho, c + i * rho, c - rho, c - i * rho};
    std::array<Complex, 3> chosen{};
    int n = 0;
    for (const Complex& s : samples) {
        if (n < 3 && std::abs(s + i) > 1e-9 * (1.0 + rho)) chosen[n++] = to_disk(s);
    }
    return circumcircle(chosen[0], chosen[1], chosen[2]);
}

const char* colour(CurveKind kind)
{
    switch (kind) {
    case CurveKind::Circle: return "#1f77b4";
    case CurveKind::Horocycle: return "#2ca02c";
    case CurveKind::Hypercycle: return "#d62728";
    }
    return "#000000";
}

const char* kind_name(CurveKind kind)
{
    switch (kind) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Horocycle: return "horocycle";
    case CurveKind::Hypercycle: return "hypercycle";
    }
    return "";
}

class Writer
{
public:
    explicit Writer(int precision) : precision_{precision} {}

    Writer& operator<<(const std::string& s)
    {
        out_ += s;
        return *this;
    }

    Writer& num(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", precision_, v);
        // avoid "-0.0000"
        std::string s = buf;
        if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
        out_ += s;
        return *this;
    }

    std::string str() const { return out_; }

private:
    int precision_;
    std::string out_;
};

}  // namespace

std::string render_face_svg(double k1, double k2, double k3, const SvgOptions& options)
{
    if (options.size <= 0 || options.margin < 0 || 2 * options.margin >= options.size) {
        throw DomainError("invalid SVG size or margin");
    }
    if (options.precision < 0 || options.precision > 12) {
        throw DomainError("SVG precision must lie in [0, 12]");
    }
    const EmbeddedFace<double> face = realize_face(k1, k2, k3);

    const double half = 0.5 * options.size;
    const double scale = half - options.margin;
    auto px = [&](Complex w) { return half + scale * w.real(); };
    auto py = [&](Complex w) { return half - scale * w.imag(); };

    Writer svg(options.precision);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << std::to_string(options.size)
        << "\" height=\"" << std::to_string(options.size) << "\" viewBox=\"0 0 " << std::to_string(options.size)
        << " " << std::to_string(options.size) << "\">\n";
    svg << "  <desc>k = ";
    svg.num(k1) << ", ";
    svg.num(k2) << ", ";
    svg.num(k3) << "</desc>\n";
    svg << "  <defs><clipPath id=\"disk\"><circle cx=\"";
    svg.num(half) << "\" cy=\"";
    svg.num(half) << "\" r=\"";
    svg.num(scale) << "\"/></clipPath></defs>\n";
    svg << "  <circle cx=\"";
    svg.num(half) << "\" cy=\"";
    svg.num(half) << "\" r=\"";
    svg.num(scale) << "\" fill=\"#f8f8f8\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    svg << "  <g clip-path=\"url(#disk)\" fill=\"none\" stroke-width=\"";
    svg.num(options.stroke_width) << "\">\n";
    for (int c = 0; c < 3; ++c) {
        const DiskCurve curve = map_curve(face.curves[c]);
        const CurveKind kind = face.circles[c].kind;
        if (curve.is_line) {
            // extend the chord well past the disk; the clip path trims it
            const Complex dir = (curve.b - curve.a) / std::abs(curve.b - curve.a);
            const Complex p = curve.a - 4.0 * dir;
            const Complex q = curve.a + 4.0 * dir;
            svg << "    <line class=\"" << kind_name(kind) << "\" x1=\"";
            svg.num(px(p)) << "\" y1=\"";
            svg.num(py(p)) << "\" x2=\"";
            svg.num(px(q)) << "\" y2=\"";
            svg.num(py(q)) << "\" stroke=\"" << colour(kind) << "\"/>\n";
        } else {
            svg << "    <circle class=\"" << kind_name(kind) << "\" cx=\"";
            svg.num(px(curve.center)) << "\" cy=\"";
            svg.num(py(curve.center)) << "\" r=\"";
            svg.num(scale * curve.radius) << "\" stroke=\"" << colour(kind) << "\"/>\n";
        }
    }
    svg << "  </g>\n";

    if (options.show_tangency) {
        svg << "  <g fill=\"#000000\">\n";
        for (const Complex& t : face.tangency) {
            const Complex w = to_disk(t);
            svg << "    <circle class=\"tangency\" cx=\"";
            svg.num(px(w)) << "\" cy=\"";
            svg.num(py(w)) << "\" r=\"";
            svg.num(options.dot_radius) << "\"/>\n";
        }
        svg << "  </g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gcp
