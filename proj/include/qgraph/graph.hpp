#pragma once

// Embedded metric graphs with a uniform magnetic field and Rashba coupling.
// Orientation matters everywhere: the magnetic line integral and the spin
// rotation are both attached to the directed edge, and the reversed edge
// carries the adjoint transport matrix.

#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <qgraph/edge_solver.hpp>

namespace qgraph {

using complexd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

struct Vertex {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double epsilon = 0.0;     // coupling constant at the node
    std::string name;         // external id (parser); empty for programmatic graphs
};

/// Uniform field of strength B_z orthogonal to the plane, symmetric gauge.
struct MagneticField {
    double strength = 0.0;
};

struct Edge {
    int tail = -1;
    int head = -1;
    double length = 0.0;
    Eigen::Vector2d direction = Eigen::Vector2d::Zero();  // (head - tail) / length
    int potential = -1;       // index into GraphModel::potentials
    double a_integral = 0.0;  // \int_0^l a(s) ds along the edge
};

/// U(2) factor e^{i \int a} (cos k_R l + i sigma sin k_R l) carried along an edge.
struct Transport {
    Mat2 matrix = Mat2::Identity();
    int edge = -1;
};

/// Magnetic potential along an edge in the symmetric gauge: constant, equal to
/// (1/2) B_z (tail_x e_y - tail_y e_x).
inline double edge_magnetic_potential(const MagneticField& field, const Eigen::Vector2d& tail,
                                      const Eigen::Vector2d& direction) {
    return 0.5 * field.strength * (tail.x() * direction.y() - tail.y() * direction.x());
}

/// Spin matrix of a direction e: off-diagonal entries e_y +- i e_x. Hermitian,
/// traceless, squares to the identity.
inline Mat2 sigma_matrix(const Eigen::Vector2d& direction) {
    if (std::abs(direction.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("sigma_matrix: direction must be a unit vector");
    Mat2 s;
    s << 0.0, complexd(direction.y(), direction.x()),
         complexd(direction.y(), -direction.x()), 0.0;
    return s;
}

/// tau = e^{i a_integral} (cos(k_R l) I + i sin(k_R l) sigma). Requires
/// sigma^2 = I; unitarity is re-checked on the result.
inline Transport transport_matrix(double a_integral, double k_R, double l, const Mat2& sigma,
                                  int edge_id = -1) {
    if ((sigma * sigma - Mat2::Identity()).norm() > 1e-10)
        throw std::invalid_argument("transport_matrix: sigma^2 != I");
    complexd phase = std::exp(complexd(0.0, a_integral));
    Mat2 m = phase * (std::cos(k_R * l) * Mat2::Identity() +
                      complexd(0.0, 1.0) * std::sin(k_R * l) * sigma);
    if ((m.adjoint() * m - Mat2::Identity()).norm() > 1e-12)
        throw std::logic_error("transport_matrix: result failed the unitarity check");
    return Transport{m, edge_id};
}

struct GraphModel {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<EdgePotential> potentials;
    MagneticField field;
    double k_R = 0.0;

    int add_vertex(double x, double y, double eps, std::string name = {}) {
        vertices.push_back(Vertex{{x, y}, eps, std::move(name)});
        return static_cast<int>(vertices.size()) - 1;
    }

    int add_potential(EdgePotential p) {
        p.validate();
        potentials.push_back(std::move(p));
        return static_cast<int>(potentials.size()) - 1;
    }

    /// Adds the directed edge tail -> head. Length and direction come from the
    /// embedding; pot < 0 creates a zero potential of the right length.
    int add_edge(int tail, int head, int pot = -1) {
        check_vertex(tail);
        check_vertex(head);
        if (tail == head) throw std::invalid_argument("add_edge: self-loops are not supported");
        Edge e;
        e.tail = tail;
        e.head = head;
        Eigen::Vector2d d = vertices[head].position - vertices[tail].position;
        e.length = d.norm();
        if (!(e.length > 0.0)) throw std::invalid_argument("add_edge: coincident endpoints");
        e.direction = d / e.length;
        if (pot < 0) pot = add_potential(EdgePotential::zero(e.length));
        if (pot >= static_cast<int>(potentials.size()))
            throw std::invalid_argument("add_edge: bad potential index");
        if (std::abs(potentials[pot].l - e.length) > 1e-9)
            throw std::invalid_argument("add_edge: potential length inconsistent with embedding");
        e.potential = pot;
        e.a_integral = edge_magnetic_potential(field, vertices[tail].position, e.direction) * e.length;
        edges.push_back(e);
        return static_cast<int>(edges.size()) - 1;
    }

    int degree(int v) const {
        int d = 0;
        for (const Edge& e : edges) d += (e.tail == v) + (e.head == v);
        return d;
    }

    /// Full consistency check: distinct positions, unit directions matching the
    /// embedding, no isolated vertices, potentials covering their edges.
    void validate() const {
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (!std::isfinite(vertices[i].position.x()) || !std::isfinite(vertices[i].position.y()) ||
                !std::isfinite(vertices[i].epsilon))
                throw std::invalid_argument("graph: non-finite vertex data");
            for (std::size_t j = i + 1; j < vertices.size(); ++j)
                if ((vertices[i].position - vertices[j].position).norm() == 0.0)
                    throw std::invalid_argument("graph: coincident vertex positions");
        }
        for (const Edge& e : edges) {
            Eigen::Vector2d d = vertices[e.head].position - vertices[e.tail].position;
            if (std::abs(d.norm() - e.length) > 1e-9 * std::max(1.0, e.length))
                throw std::invalid_argument("graph: edge length inconsistent with embedding");
            if ((d / d.norm() - e.direction).norm() > 1e-9)
                throw std::invalid_argument("graph: edge direction inconsistent with embedding");
            if (std::abs(potentials[e.potential].l - e.length) > 1e-9)
                throw std::invalid_argument("graph: potential does not cover the edge");
        }
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (degree(static_cast<int>(v)) == 0)
                throw std::invalid_argument("graph: isolated vertex");
    }

  private:
    void check_vertex(int v) const {
        if (v < 0 || v >= static_cast<int>(vertices.size()))
            throw std::invalid_argument("graph: vertex index out of range");
    }
};

inline Transport edge_transport(const GraphModel& g, int edge_index) {
    const Edge& e = g.edges.at(edge_index);
    return transport_matrix(e.a_integral, g.k_R, e.length, sigma_matrix(e.direction), edge_index);
}

/// Gauge change A -> A + grad(chi): each a_integral shifts by
/// chi(head) - chi(tail). Spectra are invariant under this.
inline GraphModel gauge_shifted(GraphModel g, const std::vector<double>& chi) {
    if (chi.size() != g.vertices.size())
        throw std::invalid_argument("gauge_shifted: one chi value per vertex required");
    for (Edge& e : g.edges) e.a_integral += chi[e.head] - chi[e.tail];
    return g;
}

/// Graph description file. Grammar (one record per line, '#' comments):
///   B <float>
///   k_R <float>
///   vertex <id> <x> <y> <epsilon>
///   edge <tail-id> <head-id> [<potential-file>]
/// Potential files are resolved relative to the graph file and shared between
/// edges naming the same file. Sampled potentials must match the embedded edge
/// length to 1e-9.
inline GraphModel parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();

    GraphModel g;
    std::map<std::string, int> ids;
    std::map<std::string, EdgePotential> file_pots;
    struct PendingEdge {
        std::string tail, head, pot_file;
        int lineno;
    };
    std::vector<PendingEdge> pending;

    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "B") {
            if (!(ss >> g.field.strength)) fail("expected: B <float>");
        } else if (tag == "k_R") {
            if (!(ss >> g.k_R)) fail("expected: k_R <float>");
        } else if (tag == "vertex") {
            std::string id;
            double x, y, eps;
            if (!(ss >> id >> x >> y >> eps)) fail("expected: vertex <id> <x> <y> <epsilon>");
            if (ids.count(id)) fail("duplicate vertex id '" + id + "'");
            ids[id] = g.add_vertex(x, y, eps, id);
        } else if (tag == "edge") {
            PendingEdge e;
            if (!(ss >> e.tail >> e.head)) fail("expected: edge <tail> <head> [potential-file]");
            ss >> e.pot_file;
            e.lineno = lineno;
            pending.push_back(std::move(e));
        } else {
            fail("unknown record '" + tag + "'");
        }
    }

    for (const PendingEdge& e : pending) {
        lineno = e.lineno;
        auto t = ids.find(e.tail);
        auto h = ids.find(e.head);
        if (t == ids.end()) fail("unknown vertex id '" + e.tail + "'");
        if (h == ids.end()) fail("unknown vertex id '" + e.head + "'");
        int pot = -1;
        if (!e.pot_file.empty()) {
            auto it = file_pots.find(e.pot_file);
            if (it == file_pots.end()) {
                std::string full = (base / e.pot_file).string();
                it = file_pots.emplace(e.pot_file, load_potential_file(full)).first;
            }
            pot = g.add_potential(it->second);
        }
        try {
            g.add_edge(t->second, h->second, pot);
        } catch (const std::invalid_argument& err) {
            fail(err.what());
        }
    }
    g.validate();
    return g;
}

}  // namespace qgraph
