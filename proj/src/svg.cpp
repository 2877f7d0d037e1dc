#include "pcf/svg.hpp"

#include <algorithm>
#include <sstream>

namespace pcf::svg {

namespace {

double approx(const Rational& r) {
    return mpq_get_d(r.raw().get_mpq_t());
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

std::string promenade_svg(const Promenade& p) {
    const double width = 640, height = 360, pad = 40;
    double t_end = approx(p.points.back().t);
    if (p.tail == PromenadeTail::AscendsForever) t_end += std::max(1.0, t_end * 0.25);
    double t_min = -std::max(1.0, t_end * 0.15);
    double v_max = 1e-9;
    for (const auto& bp : p.points) v_max = std::max(v_max, approx(bp.v));
    v_max = std::max(v_max, -t_min);
    if (p.tail == PromenadeTail::AscendsForever)
        v_max = std::max(v_max, t_end - approx(p.points.back().t));

    auto X = [&](double t) { return pad + (t - t_min) / (t_end - t_min) * (width - 2 * pad); };
    auto Y = [&](double v) { return height - pad - v / v_max * (height - 2 * pad); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    os << "<line x1=\"" << X(t_min) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(t_end)
       << "\" y2=\"" << Y(0) << "\" stroke=\"#888\"/>\n";
    os << "<line x1=\"" << X(0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(0) << "\" y2=\""
       << Y(v_max) << "\" stroke=\"#888\"/>\n";

    // ticks at the zeros T_n and labels at the maxima
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        double t = approx(p.points[i].t), v = approx(p.points[i].v);
        if (p.points[i].v.is_zero()) {
            os << "<line x1=\"" << X(t) << "\" y1=\"" << Y(0) - 4 << "\" x2=\"" << X(t)
               << "\" y2=\"" << Y(0) + 4 << "\" stroke=\"#333\"/>\n";
            os << "<text x=\"" << X(t) << "\" y=\"" << Y(0) + 16
               << "\" font-size=\"10\" text-anchor=\"middle\">" << p.points[i].t.str()
               << "</text>\n";
        } else {
            os << "<text x=\"" << X(t) << "\" y=\"" << Y(v) - 6
               << "\" font-size=\"10\" text-anchor=\"middle\">" << p.points[i].v.str()
               << "</text>\n";
        }
    }

    // the trajectory: leading descent, then the breakpoints
    os << "<polyline fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\" points=\"";
    os << fmt(X(t_min)) << "," << fmt(Y(-t_min)) << " ";
    for (const auto& bp : p.points) os << fmt(X(approx(bp.t))) << "," << fmt(Y(approx(bp.v))) << " ";
    if (p.tail == PromenadeTail::AscendsForever)
        os << fmt(X(t_end)) << "," << fmt(Y(t_end - approx(p.points.back().t)));
    os << "\"/>\n";
    os << "<text x=\"" << width - pad << "\" y=\"" << pad
       << "\" font-size=\"11\" text-anchor=\"end\">" << to_string(p.tail) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace pcf::svg
