#include "qimg/qts_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qimg/errors.hpp"

namespace qimg {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

double parse_real_strict(const std::string& tok, const char* what) {
    const char* s = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s + tok.size() || tok.empty())
        throw ParamError(std::string(what) + " '" + tok + "' is not a number");
    return v;
}

int parse_int_strict(const std::string& tok, const char* what) {
    const char* s = tok.c_str();
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s + tok.size() || tok.empty())
        throw ParamError(std::string(what) + " '" + tok + "' is not an integer");
    return static_cast<int>(v);
}

}  // namespace

Complex parse_complex(const std::string& tok) {
    if (tok.empty()) throw ParamError("empty complex token");
    if (tok.back() != 'i') return {parse_real_strict(tok, "complex entry"), 0.0};
    std::string body = tok.substr(0, tok.size() - 1);
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos)
        return {0.0, parse_real_strict(body, "imaginary part")};
    return {parse_real_strict(body.substr(0, split), "real part"),
            parse_real_strict(body.substr(split), "imaginary part")};
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex v) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

QuantumTransitionSystem parse_transition_system(const std::string& text) {
    QuantumTransitionSystem sys;
    enum class Section { Top, Symbol, Init };
    Section sec = Section::Top;
    Circuit* cur = nullptr;
    int symbol_line = 0;
    bool have_qubits = false;

    std::istringstream in(text);
    std::string raw;
    int ln = 0;

    auto end_block = [&] {
        if (sec == Section::Symbol && cur->gates.empty())
            throw ParseError(symbol_line, "empty symbol block");
    };

    while (std::getline(in, raw)) {
        ++ln;
        if (size_t hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::vector<std::string> tok = tokenize(raw);
        if (tok.empty()) continue;
        const std::string& head = tok[0];
        try {
            if (head == "qubits") {
                if (have_qubits) throw ParamError("duplicate qubits declaration");
                if (tok.size() != 2) throw ParamError("expected: qubits N");
                sys.n = parse_int_strict(tok[1], "qubit count");
                if (sys.n < 1) throw ParamError("qubit count must be positive");
                have_qubits = true;
            } else if (head == "symbol") {
                if (!have_qubits) throw ParamError("qubits must be declared first");
                if (tok.size() != 2) throw ParamError("expected: symbol NAME");
                end_block();
                const std::string& name = tok[1];
                if (sys.operations.find(name) == sys.operations.end())
                    sys.symbols.push_back(name);
                Circuit c;
                c.n = sys.n;
                c.name = name;
                sys.operations[name].push_back(std::move(c));
                cur = &sys.operations[name].back();
                sec = Section::Symbol;
                symbol_line = ln;
            } else if (head == "init") {
                if (!have_qubits) throw ParamError("qubits must be declared first");
                if (tok.size() != 1) throw ParamError("init takes no arguments");
                end_block();
                sec = Section::Init;
            } else if (head == "gate") {
                if (sec != Section::Symbol)
                    throw ParamError("gate outside a symbol block");
                if (tok.size() < 3) throw ParamError("expected: gate NAME q... [theta]");
                auto kind = gate_kind_from_name(tok[1]);
                if (!kind) throw ParamError("unknown gate '" + tok[1] + "'");
                if (*kind == GateKind::Proj || *kind == GateKind::Custom)
                    throw ParamError("'" + tok[1] + "' uses its own directive");
                Gate g;
                g.kind = *kind;
                size_t qubit_end = tok.size();
                if (gate_has_angle(*kind)) {
                    if (tok.size() < 4) throw ParamError("angle gate needs qubits and theta");
                    g.theta = parse_real_strict(tok.back(), "angle");
                    --qubit_end;
                }
                for (size_t i = 2; i < qubit_end; ++i)
                    g.qubits.push_back(parse_int_strict(tok[i], "qubit index"));
                validate_gate(g, sys.n);
                cur->gates.push_back(std::move(g));
            } else if (head == "proj") {
                if (sec != Section::Symbol)
                    throw ParamError("proj outside a symbol block");
                if (tok.size() < 3) throw ParamError("expected: proj q... BITS");
                Gate g;
                g.kind = GateKind::Proj;
                g.bits = tok.back();
                for (size_t i = 1; i + 1 < tok.size(); ++i)
                    g.qubits.push_back(parse_int_strict(tok[i], "qubit index"));
                validate_gate(g, sys.n);
                cur->gates.push_back(std::move(g));
            } else if (head == "op") {
                if (sec != Section::Symbol)
                    throw ParamError("op outside a symbol block");
                if (tok.size() < 3) throw ParamError("expected: op RxC q... entries");
                size_t x = tok[1].find('x');
                if (x == std::string::npos) throw ParamError("matrix size must look like RxC");
                int rows = parse_int_strict(tok[1].substr(0, x), "row count");
                int cols = parse_int_strict(tok[1].substr(x + 1), "column count");
                if (rows != cols || rows < 2 || (rows & (rows - 1)) != 0)
                    throw ParamError("matrix must be square with power-of-two size");
                size_t k = 0;
                while ((1 << k) < rows) ++k;
                if (tok.size() != 2 + k + static_cast<size_t>(rows) * cols)
                    throw ParamError("expected " + std::to_string(k) + " qubits and " +
                                     std::to_string(rows * cols) + " entries");
                Gate g;
                g.kind = GateKind::Custom;
                for (size_t i = 0; i < k; ++i)
                    g.qubits.push_back(parse_int_strict(tok[2 + i], "qubit index"));
                for (size_t i = 2 + k; i < tok.size(); ++i)
                    g.matrix.push_back(parse_complex(tok[i]));
                validate_gate(g, sys.n);
                cur->gates.push_back(std::move(g));
            } else if (head == "scale") {
                if (sec != Section::Symbol)
                    throw ParamError("scale outside a symbol block");
                if (cur->gates.empty())
                    throw ParamError("scale with no preceding element");
                if (tok.size() != 2) throw ParamError("expected: scale REAL");
                cur->gates.back().scale *= parse_real_strict(tok[1], "scale factor");
                validate_gate(cur->gates.back(), sys.n);
            } else if (head == "ket") {
                if (sec != Section::Init) throw ParamError("ket outside the init section");
                if (tok.size() != 2) throw ParamError("expected: ket TOKENS");
                if (tok[1].size() != static_cast<size_t>(sys.n))
                    throw ParamError("ket length must equal the qubit count");
                for (char c : tok[1])
                    if (c != '0' && c != '1' && c != '+' && c != '-')
                        throw ParamError(std::string("ket token '") + c + "' not in {0,1,+,-}");
                sys.init.kets.push_back(tok[1]);
            } else if (head == "vec") {
                if (sec != Section::Init) throw ParamError("vec outside the init section");
                if (sys.n > 22) throw ParamError("vec requires at most 22 qubits");
                size_t want = size_t{1} << sys.n;
                if (tok.size() != 1 + want)
                    throw ParamError("expected " + std::to_string(want) + " amplitudes");
                std::vector<Complex> v(want);
                for (size_t i = 0; i < want; ++i) v[i] = parse_complex(tok[1 + i]);
                sys.init.vecs.push_back(std::move(v));
            } else {
                throw ParamError("unknown directive '" + head + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(ln, e.what());
        }
    }
    end_block();
    if (!have_qubits) throw ParseError(std::max(ln, 1), "qubits declaration missing");
    validate_system(sys);
    return sys;
}

std::string serialize_transition_system(const QuantumTransitionSystem& sys) {
    std::ostringstream out;
    out << "qubits " << sys.n << '\n';
    for (const std::string& sym : sys.symbols)
        for (const Circuit& c : sys.operations.at(sym)) {
            out << "symbol " << sym << '\n';
            for (const Gate& g : c.gates) {
                switch (g.kind) {
                    case GateKind::Proj:
                        out << "proj";
                        for (int q : g.qubits) out << ' ' << q;
                        out << ' ' << g.bits << '\n';
                        break;
                    case GateKind::Custom: {
                        size_t dim = size_t{1} << g.qubits.size();
                        out << "op " << dim << 'x' << dim;
                        for (int q : g.qubits) out << ' ' << q;
                        for (const Complex& e : g.matrix) out << ' ' << format_complex(e);
                        out << '\n';
                        break;
                    }
                    default:
                        out << "gate " << gate_name(g.kind);
                        for (int q : g.qubits) out << ' ' << q;
                        if (gate_has_angle(g.kind)) out << ' ' << format_real(g.theta);
                        out << '\n';
                }
                if (g.scale != 1.0) out << "scale " << format_real(g.scale) << '\n';
            }
        }
    if (!sys.init.empty()) {
        out << "init\n";
        for (const std::string& k : sys.init.kets) out << "ket " << k << '\n';
        for (const std::vector<Complex>& v : sys.init.vecs) {
            out << "vec";
            for (const Complex& a : v) out << ' ' << format_complex(a);
            out << '\n';
        }
    }
    return out.str();
}

QuantumTransitionSystem load_transition_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParamError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    QuantumTransitionSystem sys = parse_transition_system(buf.str());
    if (sys.name.empty()) {
        size_t slash = path.find_last_of('/');
        std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
        if (base.size() > 4 && base.ends_with(".qts")) base.resize(base.size() - 4);
        sys.name = base;
    }
    return sys;
}

void save_transition_system(const QuantumTransitionSystem& sys, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParamError("cannot open '" + path + "' for writing");
    out << serialize_transition_system(sys);
    if (!out) throw ParamError("write to '" + path + "' failed");
}

}  // namespace qimg
