#include <cstdio>
#include <fstream>
#include <sstream>

#include "minsurf/mesh.hpp"

namespace minsurf::mesh {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void bad_line(const std::string& path, size_t line, const std::string& what) {
    throw MeshError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void save_obj(const TriMesh& m, const std::string& path) {
    if (m.dim != 3) throw MeshError("OBJ supports n=3 only");
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open " + path + " for writing");
    for (const Vec& v : m.vertices)
        out << "v " << g17(v.x) << " " << g17(v.y) << " " << g17(v.z) << "\n";
    for (const auto& f : m.faces)
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

TriMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open " + path);
    TriMesh m;
    m.dim = 3;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec v;
            if (!(ss >> v.x >> v.y >> v.z)) bad_line(path, lineno, "malformed vertex");
            m.vertices.push_back(v);
        } else if (tag == "f") {
            long a, b, c;
            if (!(ss >> a >> b >> c)) bad_line(path, lineno, "malformed face");
            long n = (long)m.vertices.size();
            if (a < 1 || b < 1 || c < 1 || a > n || b > n || c > n)
                bad_line(path, lineno, "face index out of range");
            m.faces.push_back({(int)a - 1, (int)b - 1, (int)c - 1});
        }
        // other OBJ records are ignored
    }
    return m;
}

void save_ply(const TriMesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open " + path + " for writing");
    bool has_n = !m.normals.empty(), has_l = !m.lambda.empty(), has_k = !m.gauss_k.empty();
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << m.vertices.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    if (m.dim == 4) out << "property double w\n";
    if (has_n) out << "property double nx\nproperty double ny\nproperty double nz\n";
    if (has_l) out << "property double lambda\n";
    if (has_k) out << "property double K\n";
    out << "element face " << m.faces.size() << "\n";
    out << "property list uchar int vertex_indices\nend_header\n";
    for (size_t i = 0; i < m.vertices.size(); ++i) {
        const Vec& v = m.vertices[i];
        out << g17(v.x) << " " << g17(v.y) << " " << g17(v.z);
        if (m.dim == 4) out << " " << g17(v.w);
        if (has_n)
            out << " " << g17(m.normals[i].x) << " " << g17(m.normals[i].y) << " "
                << g17(m.normals[i].z);
        if (has_l) out << " " << g17(m.lambda[i]);
        if (has_k) out << " " << g17(m.gauss_k[i]);
        out << "\n";
    }
    for (const auto& f : m.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

TriMesh load_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open " + path);
    std::string line;
    size_t lineno = 0;

    auto next_line = [&]() {
        if (!std::getline(in, line)) bad_line(path, lineno, "unexpected end of file");
        ++lineno;
    };

    next_line();
    if (line != "ply") bad_line(path, lineno, "not a PLY file");
    next_line();
    if (line.rfind("format ascii", 0) != 0) bad_line(path, lineno, "only ascii PLY supported");

    size_t n_vert = 0, n_face = 0;
    std::vector<std::string> vprops;
    bool in_vertex = false, in_face = false, face_list_seen = false;
    for (;;) {
        next_line();
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "comment") continue;
        if (tag == "element") {
            std::string what;
            size_t count;
            if (!(ss >> what >> count)) bad_line(path, lineno, "malformed element");
            in_vertex = what == "vertex";
            in_face = what == "face";
            if (in_vertex) n_vert = count;
            else if (in_face) n_face = count;
            else bad_line(path, lineno, "unsupported element '" + what + "'");
        } else if (tag == "property") {
            std::string type;
            ss >> type;
            if (type == "list") {
                std::string it, et, name;
                if (!(ss >> it >> et >> name) || !in_face)
                    bad_line(path, lineno, "malformed list property");
                face_list_seen = true;
            } else {
                std::string name;
                if (!(ss >> name)) bad_line(path, lineno, "malformed property");
                if (in_vertex) vprops.push_back(name);
                else bad_line(path, lineno, "scalar face properties not supported");
            }
        } else if (tag == "end_header") {
            break;
        } else {
            bad_line(path, lineno, "unexpected header line");
        }
    }
    if (!face_list_seen && n_face > 0) bad_line(path, lineno, "face element lacks index list");

    int ix = -1, iy = -1, iz = -1, iw = -1, inx = -1, iny = -1, inz = -1, il = -1, ik = -1;
    for (size_t i = 0; i < vprops.size(); ++i) {
        const std::string& p = vprops[i];
        if (p == "x") ix = (int)i;
        else if (p == "y") iy = (int)i;
        else if (p == "z") iz = (int)i;
        else if (p == "w") iw = (int)i;
        else if (p == "nx") inx = (int)i;
        else if (p == "ny") iny = (int)i;
        else if (p == "nz") inz = (int)i;
        else if (p == "lambda") il = (int)i;
        else if (p == "K") ik = (int)i;
    }
    if (ix < 0 || iy < 0 || iz < 0) bad_line(path, lineno, "vertex element lacks x/y/z");

    TriMesh m;
    m.dim = iw >= 0 ? 4 : 3;
    bool has_n = inx >= 0 && iny >= 0 && inz >= 0;
    std::vector<double> row(vprops.size());
    for (size_t v = 0; v < n_vert; ++v) {
        next_line();
        std::istringstream ss(line);
        for (size_t c = 0; c < vprops.size(); ++c)
            if (!(ss >> row[c])) bad_line(path, lineno, "malformed vertex row");
        Vec pt{row[ix], row[iy], row[iz], iw >= 0 ? row[iw] : 0.0};
        m.vertices.push_back(pt);
        if (has_n) m.normals.push_back({row[inx], row[iny], row[inz]});
        if (il >= 0) m.lambda.push_back(row[il]);
        if (ik >= 0) m.gauss_k.push_back(row[ik]);
    }
    for (size_t f = 0; f < n_face; ++f) {
        next_line();
        std::istringstream ss(line);
        int cnt;
        if (!(ss >> cnt) || cnt != 3) bad_line(path, lineno, "only triangle faces supported");
        int a, b, c;
        if (!(ss >> a >> b >> c)) bad_line(path, lineno, "malformed face row");
        if (a < 0 || b < 0 || c < 0 || (size_t)a >= n_vert || (size_t)b >= n_vert ||
            (size_t)c >= n_vert)
            bad_line(path, lineno, "face index out of range");
        m.faces.push_back({a, b, c});
    }
    return m;
}

namespace {
std::string extension(const std::string& path) {
    auto dot = path.find_last_of('.');
    return dot == std::string::npos ? "" : path.substr(dot + 1);
}
}  // namespace

void export_mesh(const TriMesh& m, const std::string& path) {
    std::string ext = extension(path);
    if (ext == "obj") save_obj(m, path);
    else if (ext == "ply") save_ply(m, path);
    else throw MeshError("unsupported mesh format '" + ext + "' (use obj or ply)");
}

TriMesh import_mesh(const std::string& path) {
    std::string ext = extension(path);
    if (ext == "obj") return load_obj(path);
    if (ext == "ply") return load_ply(path);
    throw MeshError("unsupported mesh format '" + ext + "' (use obj or ply)");
}

void save_polyline(const Polyline& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open " + path + " for writing");
    for (const Vec& p : curve.points) {
        out << g17(p.x) << " " << g17(p.y) << " " << g17(p.z);
        if (p.w != 0) out << " " << g17(p.w);
        out << "\n";
    }
    out << (curve.closed ? "closed" : "open") << "\n";
}

Polyline load_polyline(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open " + path);
    Polyline c;
    c.closed = false;
    std::string line;
    size_t lineno = 0;
    bool footer = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line == "closed" || line == "open") {
            c.closed = line == "closed";
            footer = true;
            break;
        }
        std::istringstream ss(line);
        Vec p;
        if (!(ss >> p.x >> p.y)) bad_line(path, lineno, "expected at least two coordinates");
        ss >> p.z >> p.w;  // optional
        c.points.push_back(p);
    }
    if (!footer) bad_line(path, lineno, "missing closed/open footer");
    if (c.points.size() < 2) bad_line(path, lineno, "polyline needs at least two points");
    return c;
}

}  // namespace minsurf::mesh
