#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcw/io.hpp"

namespace mcw {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSize = 400, kCenter = 200, kRadius = 160;

std::string num(double v) {
    if (std::fabs(v) < 0.005) v = 0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// vertex 0 at the top, labels increasing anti-clockwise on screen
std::pair<double, double> on_circle(int i, int N, double r) {
    double th = (90.0 + 360.0 * i / N) * kPi / 180.0;
    return {kCenter + r * std::cos(th), kCenter - r * std::sin(th)};
}

std::string svg_header() {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
       << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
    return os.str();
}

std::string label_of(const QuiverWithRelations& q, int v) {
    std::string s = std::to_string(v);
    if (v < int(q.vertex_labels.size()) && q.vertex_labels[v]) s += "\\n" + to_string(*q.vertex_labels[v]);
    return s;
}

}  // namespace

std::string render_dot(const QuiverWithRelations& q) {
    std::ostringstream os;
    os << "digraph Q {\n  node [shape=circle];\n";
    for (int v = 0; v < q.vertex_count; ++v) os << "  " << v << " [label=\"" << label_of(q, v) << "\"];\n";
    for (const auto& a : q.arrows) os << "  " << a.source << " -> " << a.target << ";\n";
    // a relation alpha beta is drawn from source(alpha) to target(beta)
    for (auto [x, y] : q.relations)
        os << "  " << q.arrows[x].source << " -> " << q.arrows[y].target
           << " [style=dotted, arrowhead=none, constraint=false];\n";
    os << "}\n";
    return os.str();
}

std::string render_dot(const Dissection& t) {
    const int N = t.params.N;
    std::ostringstream os;
    os << "graph P {\n  layout=circo;\n";
    for (int i = 0; i < N; ++i) os << "  " << i << " -- " << (i + 1) % N << ";\n";
    for (auto d : t.diagonals) os << "  " << d.a << " -- " << d.b << " [style=dashed];\n";
    os << "}\n";
    return os.str();
}

std::string render_svg(const Dissection& t) {
    const int N = t.params.N;
    std::ostringstream os;
    os << svg_header();
    os << "  <polygon fill=\"none\" stroke=\"black\" points=\"";
    for (int i = 0; i < N; ++i) {
        auto [x, y] = on_circle(i, N, kRadius);
        os << (i ? " " : "") << num(x) << ',' << num(y);
    }
    os << "\"/>\n";
    for (auto d : t.diagonals) {
        auto [x1, y1] = on_circle(d.a, N, kRadius);
        auto [x2, y2] = on_circle(d.b, N, kRadius);
        os << "  <line class=\"diagonal\" x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
           << "\" y2=\"" << num(y2) << "\" stroke=\"steelblue\"/>\n";
    }
    for (int i = 0; i < N; ++i) {
        auto [x, y] = on_circle(i, N, kRadius + 18);
        os << "  <text x=\"" << num(x) << "\" y=\"" << num(y)
           << "\" font-size=\"12\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << i << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_svg(const QuiverWithRelations& q) {
    const int n = std::max(q.vertex_count, 1);
    std::ostringstream os;
    os << svg_header();
    os << "  <defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"8\" refY=\"4\" "
          "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\"/></marker></defs>\n";
    auto shorten = [](double x1, double y1, double x2, double y2, double by) {
        double dx = x2 - x1, dy = y2 - y1, len = std::hypot(dx, dy);
        if (len < 2 * by) return std::array<double, 4>{x1, y1, x2, y2};
        return std::array<double, 4>{x1 + dx * by / len, y1 + dy * by / len, x2 - dx * by / len, y2 - dy * by / len};
    };
    for (const auto& a : q.arrows) {
        auto [x1, y1] = on_circle(a.source, n, kRadius);
        auto [x2, y2] = on_circle(a.target, n, kRadius);
        auto s = shorten(x1, y1, x2, y2, 14);
        os << "  <line class=\"arrow\" x1=\"" << num(s[0]) << "\" y1=\"" << num(s[1]) << "\" x2=\"" << num(s[2])
           << "\" y2=\"" << num(s[3]) << "\" stroke=\"black\" marker-end=\"url(#head)\"/>\n";
    }
    for (auto [x, y] : q.relations) {
        const auto& a = q.arrows[x];
        const auto& b = q.arrows[y];
        auto [ax1, ay1] = on_circle(a.source, n, kRadius);
        auto [ax2, ay2] = on_circle(a.target, n, kRadius);
        auto [bx2, by2] = on_circle(b.target, n, kRadius);
        double mx1 = (ax1 + ax2) / 2, my1 = (ay1 + ay2) / 2, mx2 = (ax2 + bx2) / 2, my2 = (ay2 + by2) / 2;
        os << "  <path class=\"relation\" d=\"M" << num(mx1) << ',' << num(my1) << " Q" << num(ax2 * 0.8 + kCenter * 0.2)
           << ',' << num(ay2 * 0.8 + kCenter * 0.2) << ' ' << num(mx2) << ',' << num(my2)
           << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
    }
    for (int v = 0; v < q.vertex_count; ++v) {
        auto [x, y] = on_circle(v, n, kRadius);
        os << "  <circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"12\" fill=\"white\" stroke=\"black\"/>\n";
        os << "  <text x=\"" << num(x) << "\" y=\"" << num(y)
           << "\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << v << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mcw
