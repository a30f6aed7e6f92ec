#include "gspi/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "gspi/error.hpp"
#include "gspi/parallel.hpp"

namespace gspi {

std::vector<NodeId> DominantPathTable::path_to(NodeId v) const
{
    std::vector<NodeId> path;
    if (ldp.at(static_cast<std::size_t>(v)) < 0)
        return path;
    for (NodeId x = v; x >= 0; x = predecessor[x])
        path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

// candidate (path to u) + v against the current path to v
bool lexicographically_smaller(const DominantPathTable& t, NodeId u, NodeId v)
{
    auto candidate = t.path_to(u);
    candidate.push_back(v);
    const auto current = t.path_to(v);
    return std::lexicographical_compare(candidate.begin(), candidate.end(), current.begin(), current.end());
}

}  // namespace

DominantPathTable dominant_paths(const WeightedGraph& g, NodeId center, PathOperator op)
{
    const int n = g.node_count();
    if (center < 0 || center >= n)
        throw ValidationError("center out of range");

    const bool product = op == PathOperator::product;
    DominantPathTable t;
    t.center = center;
    t.op = op;
    t.wdp.assign(static_cast<std::size_t>(n), product ? 0.0 : std::numeric_limits<double>::infinity());
    t.ldp.assign(static_cast<std::size_t>(n), -1);
    t.predecessor.assign(static_cast<std::size_t>(n), -1);
    std::vector<std::uint8_t> done(static_cast<std::size_t>(n), 0);

    // "better" means larger product or smaller distance
    auto better = [product](double a, double b) { return product ? a > b : a < b; };
    struct Item {
        double key;
        NodeId node;
    };
    auto cmp = [&better](const Item& a, const Item& b) {
        if (a.key != b.key)
            return better(b.key, a.key);
        return a.node > b.node;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);

    t.wdp[center] = product ? 1.0 : 0.0;
    t.ldp[center] = 0;
    heap.push({t.wdp[center], center});
    while (!heap.empty()) {
        const auto [key, u] = heap.top();
        heap.pop();
        if (done[u] || key != t.wdp[u])
            continue;
        done[u] = 1;
        for (const auto& nb : g.neighbors(u)) {
            const NodeId v = nb.node;
            if (done[v])
                continue;
            const double cand = product ? t.wdp[u] * nb.weight : t.wdp[u] + nb.distance;
            const bool improves = t.ldp[v] < 0 || better(cand, t.wdp[v]);
            if (improves || (cand == t.wdp[v] && lexicographically_smaller(t, u, v))) {
                t.wdp[v] = cand;
                t.predecessor[v] = u;
                t.ldp[v] = t.ldp[u] + 1;
                if (improves)
                    heap.push({cand, v});
            }
        }
    }
    return t;
}

std::vector<NodeId> ring(const DominantPathTable& table, int r)
{
    std::vector<NodeId> out;
    for (NodeId v = 0; v < static_cast<NodeId>(table.ldp.size()); ++v)
        if (table.ldp[v] == r)
            out.push_back(v);
    return out;
}

double MexicanHatProfile::operator()(double t) const
{
    const double s2 = sigma * sigma;
    const double norm = -4.0 / (std::pow(std::numbers::pi, 0.25) * std::sqrt(3.0 * sigma));
    return norm * (16.0 * t * t / s2 - 1.0) * std::exp(-8.0 * t * t / s2);
}

namespace {

template <typename F>
double simpson(const F& f, double a, double b, int panels)
{
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

MSequence checked(MSequence m)
{
    for (double x : m.values)
        if (x == 0.0)
            throw ValidationError("m-sequence values must be nonzero");
    return m;
}

}  // namespace

MSequence m_sequence(int scale, const MexicanHatProfile& profile)
{
    if (scale < 1)
        throw ValidationError("scale must be >= 1");
    if (!(profile.sigma > 0.0))
        throw ValidationError("sigma must be positive");
    constexpr int kPanels = 10000;
    MSequence m;
    m.scale = scale;
    const double width = 1.0 / (scale + 1);
    for (int k = 0; k <= scale; ++k)
        m.values.push_back(simpson(profile, k * width, (k + 1) * width, kPanels) / width);
    double mean = 0.0;
    for (double x : m.values)
        mean += x;
    mean /= static_cast<double>(m.values.size());
    for (double& x : m.values)
        x -= mean;
    return checked(std::move(m));
}

MSequence m_sequence(std::vector<double> values)
{
    if (values.size() < 2)
        throw ValidationError("m-sequence needs at least two values");
    double sum = 0.0;
    for (double x : values)
        sum += x;
    if (std::abs(sum) > 1e-9)
        throw ValidationError("m-sequence must sum to zero");
    MSequence m;
    m.scale = static_cast<int>(values.size()) - 1;
    m.values = std::move(values);
    return checked(std::move(m));
}

double HProfile::operator()(double x) const
{
    double r = c;
    for (int i = 0; i < k; ++i)
        r *= x;
    return r;
}

DbgwFunction dbgw_function(const WeightedGraph& g, NodeId center, int scale, const HProfile& h, const MSequence& m,
                           const DominantPathTable& table)
{
    if (m.scale != scale || static_cast<int>(m.values.size()) != scale + 1)
        throw ValidationError("m-sequence scale does not match wavelet scale");
    if (table.center != center)
        throw ValidationError("dominant path table has a different center");
    if (h.c < 1 || h.k < 1)
        throw ValidationError("H profile needs positive c and k");

    const int n = g.node_count();
    DbgwFunction f{center, scale, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    double center_value = m.values[0];
    bool any_ring = false;
    for (int r = 1; r <= scale; ++r) {
        const auto nodes = ring(table, r);
        if (nodes.empty()) {
            center_value += m.values[r];
            continue;
        }
        any_ring = true;
        double denom = 0.0;
        for (NodeId v : nodes)
            denom += h(table.wdp[v]);
        for (NodeId v : nodes)
            f.psi[v] = denom > 0.0 ? m.values[r] * h(table.wdp[v]) / denom
                                   : m.values[r] / static_cast<double>(nodes.size());
    }
    if (!any_ring)
        throw ValidationError("center " + std::to_string(center) + " has no node within the wavelet scale");
    f.psi[center] = center_value;
    return f;
}

double dbgw_coeff(std::span<const double> signal, const DbgwFunction& psi)
{
    if (signal.size() != psi.psi.size())
        throw ValidationError("signal length does not match wavelet");
    double s = 0.0;
    for (std::size_t i = 0; i < signal.size(); ++i)
        s += psi.psi[i] * signal[i];
    return s;
}

DbgwTransform::DbgwTransform(const WeightedGraph& g, const DbgwConfig& config)
    : config_(config), rows_(static_cast<std::size_t>(g.node_count()))
{
    parallel_for(rows_.size(), [&](std::size_t c) {
        const auto center = static_cast<NodeId>(c);
        const auto table = dominant_paths(g, center, config_.op);
        const auto f = dbgw_function(g, center, config_.scale, config_.h, config_.m, table);
        auto& row = rows_[c];
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (f.psi[v] != 0.0)
                row.push_back({v, f.psi[v]});
    });
}

double DbgwTransform::apply_at(NodeId center, std::span<const double> signal) const
{
    double s = 0.0;
    for (const auto& e : rows_.at(static_cast<std::size_t>(center)))
        s += e.value * signal[e.node];
    return s;
}

std::vector<double> DbgwTransform::apply(std::span<const double> signal) const
{
    if (static_cast<int>(signal.size()) != size())
        throw ValidationError("signal length does not match graph");
    std::vector<double> out(rows_.size());
    for (std::size_t c = 0; c < rows_.size(); ++c)
        out[c] = apply_at(static_cast<NodeId>(c), signal);
    return out;
}

std::vector<double> DbgwTransform::function(NodeId center) const
{
    std::vector<double> psi(rows_.size(), 0.0);
    for (const auto& e : rows_.at(static_cast<std::size_t>(center)))
        psi[e.node] = e.value;
    return psi;
}

std::vector<double> dbgw_all_coeffs(const WeightedGraph& g, std::span<const double> signal, const DbgwConfig& config)
{
    if (static_cast<int>(signal.size()) != g.node_count())
        throw ValidationError("signal length does not match graph");
    return DbgwTransform(g, config).apply(signal);
}

SgwKernel default_sgw_kernel(double scale)
{
    return {[](double x) { return x * std::exp(1.0 - x); }, scale, "x*exp(1-x)"};
}

std::vector<double> sgw_function(const SpectralBasis& basis, NodeId center, const SgwKernel& kernel)
{
    const int n = basis.size();
    if (center < 0 || center >= n)
        throw ValidationError("center out of range");
    Eigen::VectorXd coef(n);
    for (int l = 0; l < n; ++l)
        coef(l) = kernel(basis.eigenvalues(l)) * basis.eigenvectors(center, l);
    Eigen::VectorXd psi = basis.eigenvectors * coef;
    return {psi.data(), psi.data() + n};
}

std::vector<double> sgw_all_coeffs(const SpectralBasis& basis, std::span<const double> signal, const SgwKernel& kernel)
{
    const int n = basis.size();
    if (static_cast<int>(signal.size()) != n)
        throw ValidationError("signal length does not match basis");
    Eigen::Map<const Eigen::VectorXd> s(signal.data(), n);
    Eigen::VectorXd hat = basis.eigenvectors.transpose() * s;
    for (int l = 0; l < n; ++l)
        hat(l) *= kernel(basis.eigenvalues(l));
    Eigen::VectorXd out = basis.eigenvectors * hat;
    return {out.data(), out.data() + n};
}

SgwTransform::SgwTransform(const SpectralBasis& basis, const SgwKernel& kernel)
{
    Eigen::VectorXd gains(basis.size());
    for (int l = 0; l < basis.size(); ++l)
        gains(l) = kernel(basis.eigenvalues(l));
    op_ = basis.eigenvectors * gains.asDiagonal() * basis.eigenvectors.transpose();
}

std::vector<double> SgwTransform::apply(std::span<const double> signal) const
{
    if (static_cast<Eigen::Index>(signal.size()) != op_.rows())
        throw ValidationError("signal length does not match basis");
    Eigen::Map<const Eigen::VectorXd> s(signal.data(), op_.rows());
    Eigen::VectorXd out = op_ * s;
    return {out.data(), out.data() + out.size()};
}

}  // namespace gspi
