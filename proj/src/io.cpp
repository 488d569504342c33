#include "gcpack/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gcpack/errors.hpp"

namespace gcp
{

namespace
{

using json = nlohmann::ordered_json;

int line_at(const std::string& text, std::size_t pos)
{
    pos = std::min(pos, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

std::size_t key_position(const std::string& text, const std::string& key)
{
    const std::string quoted = "\"" + key + "\"";
    std::size_t pos = text.find(quoted);
    while (pos != std::string::npos) {
        std::size_t after = pos + quoted.size();
        while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
        if (after < text.size() && text[after] == ':') return after + 1;
        pos = text.find(quoted, pos + 1);
    }
    return std::string::npos;
}

// Start of the index-th element of the first array opening at or after pos
std::size_t element_position(const std::string& text, std::size_t pos, int index)
{
    if (pos == std::string::npos) return pos;
    pos = text.find('[', pos);
    if (pos == std::string::npos) return pos;
    int depth = 0;
    int count = -1;
    bool expecting = true;
    bool in_string = false;
    for (std::size_t i = pos + 1; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (depth == 0 && expecting && !std::isspace(static_cast<unsigned char>(c)) && c != ']') {
            if (++count == index) return i;
            expecting = false;
        }
        switch (c) {
        case '"': in_string = true; break;
        case '[':
        case '{': ++depth; break;
        case ']':
        case '}':
            if (depth-- == 0) return std::string::npos;
            break;
        case ',':
            if (depth == 0) expecting = true;
            break;
        default: break;
        }
    }
    return std::string::npos;
}

[[noreturn]] void fail(const std::string& text, std::size_t pos, const std::string& field, const std::string& what)
{
    const int line = pos == std::string::npos ? 0 : line_at(text, pos);
    std::ostringstream msg;
    if (line > 0) msg << "line " << line << ": ";
    msg << field << ": " << what;
    throw ParseError(msg.str(), line, field);
}

json parse_document(const std::string& text)
{
    try {
        json doc = json::parse(text);
        if (!doc.is_object()) {
            throw ParseError("line 1: document must be a JSON object", 1, "");
        }
        return doc;
    } catch (const json::parse_error& e) {
        const int line = line_at(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("line " + std::to_string(line) + ": " + e.what(), line, "");
    }
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path, 0, "");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Triangulation parse_triangulation(const std::string& text)
{
    const json doc = parse_document(text);
    const std::size_t nv_pos = key_position(text, "num_vertices");
    if (!doc.contains("num_vertices")) fail(text, 0, "num_vertices", "missing");
    const json& nv = doc["num_vertices"];
    if (!nv.is_number_integer() || nv.get<long long>() <= 0 || nv.get<long long>() > 1'000'000'000) {
        fail(text, nv_pos, "num_vertices", "expected a positive integer");
    }
    const int n = nv.get<int>();

    const std::size_t faces_pos = key_position(text, "faces");
    if (!doc.contains("faces")) fail(text, 0, "faces", "missing");
    const json& faces = doc["faces"];
    if (!faces.is_array()) fail(text, faces_pos, "faces", "expected an array of vertex triples");

    std::vector<Face> out;
    out.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const std::string field = "faces[" + std::to_string(f) + "]";
        const std::size_t face_pos = element_position(text, faces_pos, static_cast<int>(f));
        const json& face = faces[f];
        if (!face.is_array() || face.size() != 3) fail(text, face_pos, field, "expected 3 vertex indices");
        Face tri{};
        for (int c = 0; c < 3; ++c) {
            const json& v = face[c];
            if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() >= n) {
                fail(text, element_position(text, face_pos, c), field + "[" + std::to_string(c) + "]",
                     "expected an integer in [0, " + std::to_string(n) + ")");
            }
            tri[c] = v.get<int>();
        }
        out.push_back(tri);
    }
    return Triangulation(n, std::move(out));
}

Triangulation load_triangulation(const std::string& path)
{
    return parse_triangulation(read_file(path));
}

std::vector<double> parse_targets(const std::string& text, int num_vertices)
{
    const json doc = parse_document(text);
    const std::size_t pos = key_position(text, "L_hat");
    if (!doc.contains("L_hat")) fail(text, 0, "L_hat", "missing");
    const json& values = doc["L_hat"];
    if (!values.is_array()) fail(text, pos, "L_hat", "expected an array of positive numbers");
    if (static_cast<int>(values.size()) != num_vertices) {
        fail(text, pos, "L_hat",
             "has " + std::to_string(values.size()) + " entries, expected " + std::to_string(num_vertices));
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const json& v = values[i];
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
            fail(text, element_position(text, pos, static_cast<int>(i)), "L_hat[" + std::to_string(i) + "]",
                 "expected a positive number");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<double> load_targets(const std::string& path, int num_vertices)
{
    return parse_targets(read_file(path), num_vertices);
}

std::string solve_report(const ReportContext& ctx, const SolveResult<double>& result,
                         const std::optional<RealizedMetric<double>>& metric,
                         const std::optional<RateEstimate>& rate)
{
    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["status"] = to_string(result.status);
    report["message"] = result.message;
    report["num_vertices"] = ctx.tri.num_vertices();
    report["num_faces"] = ctx.tri.num_faces();

    if (!result.witness.empty()) {
        report["witness"] = result.witness;
    }

    if (metric) {
        json vertices = json::array();
        for (const VertexRecord<double>& rec : metric->vertices) {
            json v;
            v["index"] = rec.index;
            v["k"] = rec.k;
            v["class"] = to_string(rec.vertex_class);
            v["L"] = rec.L;
            v["L_hat"] = ctx.targets[rec.index];
            switch (rec.vertex_class) {
            case VertexClass::Cone:
                v["cone_angle"] = *rec.cone_angle;
                v["gaussian_curvature"] = *rec.gaussian_curvature;
                break;
            case VertexClass::Boundary:
                v["boundary_length"] = *rec.boundary_length;
                v["boundary_segments"] = rec.boundary_segments;
                break;
            case VertexClass::Cusp: v["cusp"] = true; break;
            }
            vertices.push_back(std::move(v));
        }
        report["vertices"] = std::move(vertices);
        json global;
        global["chi_S"] = metric->audit.chi_surface;
        global["chi_realized"] = metric->audit.chi_realized;
        global["total_area"] = metric->audit.total_area;
        global["interstice_area"] = metric->interstice_area;
        global["audit_residual"] = metric->audit.residual;
        report["global"] = std::move(global);
    }

    json solver;
    solver["stepper"] = ctx.config.stepper == Stepper::RK4 ? "rk4" : "adaptive";
    solver["newton"] = ctx.config.use_newton;
    solver["residual_tol"] = ctx.config.residual_tol;
    solver["class_tol"] = ctx.class_tol;
    solver["residual_max"] = result.residual_max;
    solver["flow_steps"] = result.flow_steps;
    solver["rejected_steps"] = result.rejected_steps;
    solver["newton_iterations"] = result.newton_iterations;
    solver["final_time"] = result.trace.samples.empty() ? 0.0 : result.trace.samples.back().t;
    if (rate) {
        solver["rate"] = {{"lambda", rate->lambda}, {"r_squared", rate->r_squared}, {"samples", rate->samples}};
    } else {
        solver["rate"] = nullptr;
    }
    report["solver"] = std::move(solver);
    return report.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& out, const FlowTrace<double>& trace, int num_vertices)
{
    out << "# vertices=" << num_vertices << "\n";
    out << "t,residual_max,residual_2norm";
    for (int i = 0; i < num_vertices; ++i) out << ",K_" << i;
    out << "\n";
    for (const FlowSample<double>& s : trace.samples) {
        out << format_number(s.t) << ',' << format_number(s.residual_max) << ','
            << format_number(s.residual_2norm);
        for (Eigen::Index i = 0; i < s.K.size(); ++i) out << ',' << format_number(s.K[i]);
        out << "\n";
    }
}

}  // namespace gcp
