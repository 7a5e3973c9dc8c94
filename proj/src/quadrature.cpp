#include "stokeslab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stokeslab {

namespace {

// Symmetric triangle rules after Dunavant. Orbits are given in barycentric
// form: "1" is the centroid, "3" the three permutations of (a,b,b) with
// a = 1-2b, "6" all permutations of (a,b,c). Weights are normalized to sum
// to one and scaled to the reference measure 1/2 when the table is built.
struct Orbit {
    int type;  // 1, 3 or 6
    double w;
    double b;  // type 3: repeated coordinate; type 6: second coordinate
    double c;  // type 6 only: third coordinate
};

TriRule build_rule(int exactness, const std::vector<Orbit>& orbits) {
    TriRule rule;
    rule.exactness = exactness;
    auto push = [&rule](double w, double l0, double l1, double l2) {
        rule.points.push_back({{l0, l1, l2}, 0.5 * w});
    };
    for (const Orbit& o : orbits) {
        if (o.type == 1) {
            push(o.w, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
        } else if (o.type == 3) {
            const double a = 1.0 - 2.0 * o.b;
            push(o.w, a, o.b, o.b);
            push(o.w, o.b, a, o.b);
            push(o.w, o.b, o.b, a);
        } else {
            const double a = 1.0 - o.b - o.c;
            push(o.w, a, o.b, o.c);
            push(o.w, a, o.c, o.b);
            push(o.w, o.b, a, o.c);
            push(o.w, o.b, o.c, a);
            push(o.w, o.c, a, o.b);
            push(o.w, o.c, o.b, a);
        }
    }
    return rule;
}

const TriRule& dunavant(int exactness) {
    static const std::map<int, TriRule> rules = [] {
        std::map<int, TriRule> m;
        m.emplace(1, build_rule(1, {{1, 1.0, 0, 0}}));
        m.emplace(2, build_rule(2, {{3, 1.0 / 3.0, 1.0 / 6.0, 0}}));
        m.emplace(4, build_rule(4, {{3, 0.223381589678011, 0.445948490915965, 0},
                                    {3, 0.109951743655322, 0.091576213509771, 0}}));
        m.emplace(5, build_rule(5, {{1, 0.225, 0, 0},
                                    {3, 0.132394152788506, 0.470142064105115, 0},
                                    {3, 0.125939180544827, 0.101286507323456, 0}}));
        m.emplace(6, build_rule(6, {{3, 0.116786275726379, 0.249286745170910, 0},
                                    {3, 0.050844906370207, 0.063089014491502, 0},
                                    {6, 0.082851075618374, 0.310352451033785, 0.053145049844816}}));
        m.emplace(8, build_rule(8, {{1, 0.1443156076777872, 0, 0},
                                    {3, 0.0950916342672846, 0.4592925882927232, 0},
                                    {3, 0.1032173705347183, 0.1705693077517602, 0},
                                    {3, 0.0324584976231980, 0.0505472283170310, 0},
                                    {6, 0.0272303141744350, 0.2631128296346381, 0.0083947774099576}}));
        m.emplace(10, build_rule(10, {{1, 0.090817990382754, 0, 0},
                                      {3, 0.036725957756467, 0.485577633383657, 0},
                                      {3, 0.045321059435528, 0.109481575485037, 0},
                                      {6, 0.072757916845420, 0.307939838764121, 0.141707219414880},
                                      {6, 0.028327242531057, 0.246672560639903, 0.025003534762686},
                                      {6, 0.009421666963733, 0.066803251012200, 0.009540815400299}}));
        m.emplace(12, build_rule(12, {{3, 0.025731066440455, 0.488217389773805, 0},
                                      {3, 0.043692544538038, 0.439724392294460, 0},
                                      {3, 0.062858224217885, 0.271210385012116, 0},
                                      {3, 0.034796112930709, 0.127576145541586, 0},
                                      {3, 0.006166261051559, 0.021317350453210, 0},
                                      {6, 0.040371557766381, 0.275713269685514, 0.115343494534698},
                                      {6, 0.022356773202303, 0.281325580989940, 0.022838332222257},
                                      {6, 0.017316231108659, 0.116251915907597, 0.025734050548330}}));
        return m;
    }();
    auto it = rules.lower_bound(exactness);
    if (it == rules.end()) throw std::invalid_argument("triangle_rule: degree out of range");
    return it->second;
}

// Gauss-Legendre nodes/weights on [-1,1].
EdgeRule build_edge_rule(int exactness, const std::vector<std::pair<double, double>>& half) {
    EdgeRule rule;
    rule.exactness = exactness;
    for (const auto& [x, w] : half) {
        rule.points.push_back({0.5 * (1.0 - x), 0.5 * w});
        if (x != 0.0) rule.points.push_back({0.5 * (1.0 + x), 0.5 * w});
    }
    std::sort(rule.points.begin(), rule.points.end(),
              [](const EdgeQuadPoint& a, const EdgeQuadPoint& b) { return a.s < b.s; });
    return rule;
}

const EdgeRule& gauss(int exactness) {
    static const std::map<int, EdgeRule> rules = [] {
        std::map<int, EdgeRule> m;
        m.emplace(1, build_edge_rule(1, {{0.0, 2.0}}));
        m.emplace(3, build_edge_rule(3, {{0.5773502691896257645, 1.0}}));
        m.emplace(5, build_edge_rule(5, {{0.0, 8.0 / 9.0}, {0.7745966692414833770, 5.0 / 9.0}}));
        m.emplace(7, build_edge_rule(7, {{0.3399810435848562648, 0.6521451548625461426},
                                         {0.8611363115940525752, 0.3478548451374538574}}));
        m.emplace(9, build_edge_rule(9, {{0.0, 0.5688888888888888889},
                                         {0.5384693101056830910, 0.4786286704993664680},
                                         {0.9061798459386639928, 0.2369268850561890875}}));
        m.emplace(11, build_edge_rule(11, {{0.2386191860831969086, 0.4679139345726910474},
                                           {0.6612093864662645137, 0.3607615730481386076},
                                           {0.9324695142031520278, 0.1713244923791703450}}));
        return m;
    }();
    auto it = rules.lower_bound(exactness);
    if (it == rules.end()) throw std::invalid_argument("edge_rule: degree out of range");
    return it->second;
}

}  // namespace

const TriRule& triangle_rule(int degree) {
    if (degree < 1 || degree > 12) throw std::invalid_argument("triangle_rule: degree out of range [1,12]");
    return dunavant(degree);
}

const EdgeRule& edge_rule(int degree) {
    if (degree < 1 || degree > 10) throw std::invalid_argument("edge_rule: degree out of range [1,10]");
    return gauss(degree);
}

namespace {

// Sutherland-Hodgman clip of a convex polygon against a half-plane sign*(x - x0) <= 0.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, double x0, double sign) {
    std::vector<Vec2> out;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        const Vec2 cur = poly[i];
        const Vec2 nxt = poly[(i + 1) % n];
        const double dc = sign * (cur.x - x0);
        const double dn = sign * (nxt.x - x0);
        if (dc <= 0.0) out.push_back(cur);
        if ((dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0)) {
            const double s = dc / (dc - dn);
            out.push_back(cur + (nxt - cur) * s);
        }
    }
    return out;
}

}  // namespace

std::vector<std::array<Vec2, 3>> split_triangle_at_vertical_lines(const std::array<Vec2, 3>& p,
                                                                  const std::vector<double>& x_breaks) {
    std::vector<double> breaks = x_breaks;
    std::sort(breaks.begin(), breaks.end());
    std::vector<std::array<Vec2, 3>> out;
    const double xmin = std::min({p[0].x, p[1].x, p[2].x});
    const double xmax = std::max({p[0].x, p[1].x, p[2].x});
    std::vector<double> cuts = {xmin};
    for (double b : breaks) {
        if (b > xmin && b < xmax) cuts.push_back(b);
    }
    cuts.push_back(xmax);
    if (cuts.size() == 2) {
        out.push_back(p);
        return out;
    }
    const std::vector<Vec2> tri = {p[0], p[1], p[2]};
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        std::vector<Vec2> poly = clip_halfplane(tri, cuts[i], -1.0);    // x >= cuts[i]
        poly = clip_halfplane(poly, cuts[i + 1], +1.0);                 // x <= cuts[i+1]
        if (poly.size() < 3) continue;
        for (size_t k = 1; k + 1 < poly.size(); ++k) {
            std::array<Vec2, 3> sub = {poly[0], poly[k], poly[k + 1]};
            if (std::abs(cross(sub[1] - sub[0], sub[2] - sub[0])) < 1e-30) continue;
            out.push_back(sub);
        }
    }
    return out;
}

}  // namespace stokeslab
