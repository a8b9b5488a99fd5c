#include "pbv/core.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace pbv {

// -------------------------------------------------------------------------
// common.hpp helpers
// -------------------------------------------------------------------------

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& token, const std::string& context) {
    std::string t = trim(token);
    if (t.empty()) fail("parse", context + ": empty numeric field");
    const char* begin = t.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + t.size() || errno == ERANGE)
        fail("parse", context + ": bad number '" + t + "'");
    return v;
}

long parse_long(const std::string& token, const std::string& context) {
    std::string t = trim(token);
    long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        fail("parse", context + ": bad integer '" + t + "'");
    return v;
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) fail("io", "cannot open '" + tmp + "' for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) fail("io", "short write to '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail("io", "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("io", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// -------------------------------------------------------------------------
// Images
// -------------------------------------------------------------------------

GrayImage make_image(int width, int height, std::uint8_t fill) {
    if (width <= 0 || height <= 0) fail("image", "image dimensions must be positive");
    GrayImage img;
    img.width = width;
    img.height = height;
    img.data.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

void validate_image(const GrayImage& img) {
    if (img.width <= 0 || img.height <= 0)
        fail("image", "image dimensions must be positive");
    if (img.data.size() != static_cast<std::size_t>(img.width) * img.height)
        fail("image", "pixel buffer size does not match width*height");
    if (img.anchor) {
        const EyeAnchor& a = *img.anchor;
        if (a.x < 0 || a.x > img.width - 1 || a.y < 0 || a.y > img.height - 1)
            fail("image", "anchor outside image bounds");
        if (a.scale_ref <= 0) fail("image", "scale_ref must be positive");
    }
}

// -------------------------------------------------------------------------
// Templates
// -------------------------------------------------------------------------

const char* kind_name(TemplateKind k) {
    switch (k) {
        case TemplateKind::RealVector: return "real-vector";
        case TemplateKind::ComplexVector: return "complex-vector";
        case TemplateKind::CodeHistogram: return "code-histogram";
        case TemplateKind::KeypointSet: return "keypoint-set";
        case TemplateKind::Embedding: return "embedding";
    }
    return "?";
}

std::uint64_t dim_product(const std::vector<std::uint64_t>& dims) {
    std::uint64_t p = 1;
    for (std::uint64_t d : dims) p *= d;
    return p;
}

void validate_template(const Template& t) {
    if (t.comparator_id.empty()) fail("template", "comparator id must be non-empty");
    if (t.dims.empty()) fail("template", "dims must be non-empty");
    std::uint64_t n = dim_product(t.dims);
    std::uint64_t expect = (t.kind == TemplateKind::ComplexVector) ? 2 * n : n;
    if (t.payload.size() != expect)
        fail("template", "payload length " + std::to_string(t.payload.size()) +
                             " does not match dims (expected " + std::to_string(expect) + ")");
    if (t.kind == TemplateKind::CodeHistogram) {
        for (double v : t.payload)
            if (v < 0 || v != std::floor(v) || v > 9.007199254740992e15)
                fail("template", "code-histogram entries must be non-negative integers");
    }
    if (t.kind == TemplateKind::KeypointSet) {
        if (t.dims.size() != 2 || t.dims[1] != 132)
            fail("template", "keypoint-set dims must be [n,132]");
    }
}

namespace {

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

class ByteReader {
public:
    explicit ByteReader(std::string_view b) : bytes_(b) {}

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    std::string str(std::size_t n) {
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    bool at_end() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) fail("template", "truncated template data");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::string serialize_template(const Template& t) {
    validate_template(t);
    std::string out;
    out += "PTPL";
    out.push_back(1); // version
    out.push_back(static_cast<char>(t.kind));
    put_u32(out, static_cast<std::uint32_t>(t.comparator_id.size()));
    out += t.comparator_id;
    put_u64(out, t.dims.size());
    for (std::uint64_t d : t.dims) put_u64(out, d);
    if (t.kind == TemplateKind::CodeHistogram) {
        for (double v : t.payload) put_u64(out, static_cast<std::uint64_t>(v));
    } else {
        for (double v : t.payload) put_f64(out, v);
    }
    return out;
}

Template deserialize_template(std::string_view bytes) {
    ByteReader r(bytes);
    if (r.str(4) != "PTPL") fail("template", "bad magic, not a template file");
    std::uint8_t version = r.u8();
    if (version != 1) fail("template", "unsupported template version " + std::to_string(version));
    std::uint8_t kind = r.u8();
    if (kind > 4) fail("template", "unknown template kind byte " + std::to_string(kind));
    Template t;
    t.kind = static_cast<TemplateKind>(kind);
    std::uint32_t id_len = r.u32();
    t.comparator_id = r.str(id_len);
    std::uint64_t nd = r.u64();
    if (nd == 0 || nd > 16) fail("template", "bad dim count");
    t.dims.resize(nd);
    for (auto& d : t.dims) d = r.u64();
    std::uint64_t n = dim_product(t.dims);
    if (t.kind == TemplateKind::ComplexVector) n *= 2;
    if (n > (1ULL << 32)) fail("template", "template payload too large");
    t.payload.resize(n);
    if (t.kind == TemplateKind::CodeHistogram) {
        for (auto& v : t.payload) v = static_cast<double>(r.u64());
    } else {
        for (auto& v : t.payload) v = r.f64();
    }
    if (!r.at_end()) fail("template", "trailing bytes after template payload");
    validate_template(t);
    return t;
}

void write_template(const Template& t, const std::string& path) {
    atomic_write_file(path, serialize_template(t));
}

Template read_template(const std::string& path) {
    return deserialize_template(read_text_file(path));
}

// -------------------------------------------------------------------------
// Manifests
// -------------------------------------------------------------------------

namespace {

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') return false;
    return true;
}

} // namespace

std::string SampleRef::key() const {
    return subject + ":" + eye + ":" + sensor + ":" + std::to_string(index);
}

std::string sanitize_key(const std::string& key) {
    std::string out = key;
    std::replace(out.begin(), out.end(), ':', '_');
    return out;
}

std::vector<SampleRef> read_manifest(const std::string& path) {
    std::string text = read_text_file(path);
    std::vector<std::string> lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "subject,eye,sensor,index,path")
        fail("manifest", path + ": expected header subject,eye,sensor,index,path");
    std::vector<SampleRef> rows;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty()) continue;
        std::string ctx = path + ":" + std::to_string(i + 1);
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 5) fail("manifest", ctx + ": expected 5 fields, got " + std::to_string(f.size()));
        SampleRef s;
        s.subject = trim(f[0]);
        std::string eye = trim(f[1]);
        s.sensor = trim(f[2]);
        long idx = parse_long(f[3], ctx);
        s.path = trim(f[4]);
        if (!valid_name(s.subject)) fail("manifest", ctx + ": subject must be [A-Za-z0-9-]+");
        if (eye != "L" && eye != "R") fail("manifest", ctx + ": eye must be L or R");
        s.eye = eye[0];
        if (!valid_name(s.sensor)) fail("manifest", ctx + ": sensor must be [A-Za-z0-9-]+");
        if (idx < 1) fail("manifest", ctx + ": index must be >= 1");
        s.index = static_cast<int>(idx);
        if (!seen.insert(s.key()).second)
            fail("manifest", ctx + ": duplicate sample key " + s.key());
        rows.push_back(std::move(s));
    }
    return rows;
}

void write_manifest(const std::vector<SampleRef>& rows, const std::string& path) {
    std::ostringstream out;
    out << "subject,eye,sensor,index,path\n";
    for (const SampleRef& s : rows)
        out << s.subject << ',' << s.eye << ',' << s.sensor << ',' << s.index << ',' << s.path << '\n';
    atomic_write_file(path, out.str());
}

// -------------------------------------------------------------------------
// Trials
// -------------------------------------------------------------------------

void write_trials(const TrialSet& set, const std::string& path) {
    std::ostringstream out;
    out << "trial_id,label,mode,probe_key,gallery_key\n";
    for (const Trial& t : set.trials) {
        out << t.trial_id << ',' << (t.label == TrialLabel::Target ? 1 : 0) << ','
            << (t.mode == TrialMode::SameSensor ? "same" : "cross") << ',' << t.probe_key << ','
            << t.gallery_key << '\n';
    }
    atomic_write_file(path, out.str());
}

TrialSet read_trials(const std::string& path) {
    std::string text = read_text_file(path);
    std::vector<std::string> lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "trial_id,label,mode,probe_key,gallery_key")
        fail("trials", path + ": expected header trial_id,label,mode,probe_key,gallery_key");
    TrialSet set;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty()) continue;
        std::string ctx = path + ":" + std::to_string(i + 1);
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 5) fail("trials", ctx + ": expected 5 fields");
        Trial t;
        t.trial_id = trim(f[0]);
        long label = parse_long(f[1], ctx);
        if (label != 0 && label != 1) fail("trials", ctx + ": label must be 0 or 1");
        t.label = label == 1 ? TrialLabel::Target : TrialLabel::NonTarget;
        std::string mode = trim(f[2]);
        if (mode == "same")
            t.mode = TrialMode::SameSensor;
        else if (mode == "cross")
            t.mode = TrialMode::CrossSensor;
        else
            fail("trials", ctx + ": mode must be same or cross");
        t.probe_key = trim(f[3]);
        t.gallery_key = trim(f[4]);
        set.trials.push_back(std::move(t));
    }
    return set;
}

// -------------------------------------------------------------------------
// Score tables
// -------------------------------------------------------------------------

void write_scores(const ScoreTable& table, const std::string& path) {
    std::ostringstream out;
    out << "trial_id,label,comparator,score\n";
    char buf[64];
    for (const ScoreRow& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.score);
        out << r.trial_id << ',' << r.label << ',' << r.comparator << ',' << buf << '\n';
    }
    atomic_write_file(path, out.str());
}

ScoreTable read_scores(const std::string& path) {
    std::string text = read_text_file(path);
    std::vector<std::string> lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "trial_id,label,comparator,score")
        fail("scores", path + ": expected header trial_id,label,comparator,score");
    ScoreTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty()) continue;
        std::string ctx = path + ":" + std::to_string(i + 1);
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 4) fail("scores", ctx + ": expected 4 fields");
        ScoreRow r;
        r.trial_id = trim(f[0]);
        long label = parse_long(f[1], ctx);
        if (label != 0 && label != 1) fail("scores", ctx + ": label must be 0 or 1");
        r.label = static_cast<int>(label);
        r.comparator = trim(f[2]);
        r.score = parse_double(f[3], ctx);
        table.rows.push_back(std::move(r));
    }
    return table;
}

std::vector<std::string> comparators_in(const ScoreTable& table) {
    std::set<std::string> ids;
    for (const ScoreRow& r : table.rows) ids.insert(r.comparator);
    return std::vector<std::string>(ids.begin(), ids.end());
}

} // namespace pbv
