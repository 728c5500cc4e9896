#pragma once

// Deterministic output formatting. All floating-point values in data files
// are rendered with 15 significant digits ("%.15g"), everywhere, so repeated
// runs are byte-identical and diffs are meaningful. CSV: '.' decimal, ','
// delimiter, Unix newlines, mandatory header. JSON: insertion-ordered keys,
// non-finite numbers rendered as null.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace hartmann::io {

inline std::string num(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

inline std::string num(int value) { return std::to_string(value); }

// Minimal CSV assembler. Fields are numbers or simple identifiers by
// construction, so no quoting/escaping is needed; this asserts that.
class Csv {
public:
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ += ',';
            out_ += fields[i];
        }
        out_ += '\n';
    }
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

// Minimal JSON emitter with explicit structure calls; keys appear in
// insertion order and doubles go through num(). Values that are not finite
// become null so the output stays valid JSON.
class JsonWriter {
public:
    JsonWriter& begin_object() { open('{'); return *this; }
    JsonWriter& end_object() { close('}'); return *this; }
    JsonWriter& begin_array() { open('['); return *this; }
    JsonWriter& end_array() { close(']'); return *this; }

    JsonWriter& key(const std::string& name) {
        separate();
        out_ += '"';
        out_ += name;
        out_ += "\":";
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        separate();
        if (std::isfinite(v))
            out_ += num(v);
        else
            out_ += "null";
        return *this;
    }
    JsonWriter& value(int v) { separate(); out_ += std::to_string(v); return *this; }
    JsonWriter& value(bool v) { separate(); out_ += v ? "true" : "false"; return *this; }
    JsonWriter& value(const std::string& v) {
        separate();
        out_ += '"';
        for (char c : v) {
            if (c == '"' || c == '\\') out_ += '\\';
            out_ += c;
        }
        out_ += '"';
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& null() { separate(); out_ += "null"; return *this; }

    const std::string& str() const { return out_; }

private:
    void open(char c) {
        separate();
        out_ += c;
        need_comma_ = false;
    }
    void close(char c) {
        out_ += c;
        need_comma_ = true;
    }
    void separate() {
        if (pending_value_) {
            // The upcoming token completes a `key:` member; the member after
            // it will need a comma.
            pending_value_ = false;
            need_comma_ = true;
            return;
        }
        if (need_comma_) out_ += ',';
        need_comma_ = true;
    }

    std::string out_;
    bool need_comma_ = false;
    bool pending_value_ = false;
};

}  // namespace hartmann::io
