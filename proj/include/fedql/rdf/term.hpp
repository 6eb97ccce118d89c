/*
 * Copyright (c) 2026 the fedql authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <tuple>

#include "fedql/errors.hpp"
#include "fedql/util/strings.hpp"

namespace fedql::rdf {

namespace vocab {
inline const std::string xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline const std::string xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";
inline const std::string xsd_decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline const std::string xsd_double = "http://www.w3.org/2001/XMLSchema#double";
inline const std::string xsd_float = "http://www.w3.org/2001/XMLSchema#float";
inline const std::string xsd_boolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline const std::string rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline const std::string rdf_lang_string = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
} // namespace vocab

enum class TermKind : uint8_t { Iri, Literal, BlankNode };

/// An RDF term. Literals always carry a datatype (xsd:string by default);
/// a language tag implies the rdf:langString datatype. Equality is structural.
class Term {
public:
    static Term iri(std::string value) {
        for (char c : value) {
            if (c == '<' || c == '>' || std::isspace(static_cast<unsigned char>(c)))
                throw Error("invalid IRI (whitespace or angle bracket): " + value);
        }
        if (value.empty()) throw Error("empty IRI");
        Term t;
        t.kind_ = TermKind::Iri;
        t.value_ = std::move(value);
        return t;
    }

    static Term literal(std::string lexical, std::string datatype = vocab::xsd_string) {
        if (datatype.empty()) datatype = vocab::xsd_string;
        if (datatype == vocab::rdf_lang_string)
            throw Error("language-string literal requires a language tag");
        Term t;
        t.kind_ = TermKind::Literal;
        t.value_ = std::move(lexical);
        t.datatype_ = std::move(datatype);
        return t;
    }

    static Term lang_literal(std::string lexical, std::string tag) {
        if (!valid_lang_tag(tag)) throw Error("invalid language tag: " + tag);
        Term t;
        t.kind_ = TermKind::Literal;
        t.value_ = std::move(lexical);
        t.datatype_ = vocab::rdf_lang_string;
        t.lang_ = util::to_lower(std::move(tag));
        return t;
    }

    static Term blank(std::string label) {
        if (label.empty()) throw Error("empty blank node label");
        for (char c : label) {
            if (!std::isalnum(static_cast<unsigned char>(c)))
                throw Error("blank node label must be alphanumeric: " + label);
        }
        Term t;
        t.kind_ = TermKind::BlankNode;
        t.value_ = std::move(label);
        return t;
    }

    static Term integer(long long v) { return literal(std::to_string(v), vocab::xsd_integer); }
    static Term boolean(bool v) { return literal(v ? "true" : "false", vocab::xsd_boolean); }

    TermKind kind() const { return kind_; }
    bool is_iri() const { return kind_ == TermKind::Iri; }
    bool is_literal() const { return kind_ == TermKind::Literal; }
    bool is_blank() const { return kind_ == TermKind::BlankNode; }

    /// IRI string, literal lexical form, or blank node label.
    const std::string& value() const { return value_; }
    const std::string& datatype() const { return datatype_; }
    const std::string& lang() const { return lang_; }
    bool has_lang() const { return !lang_.empty(); }

    bool operator==(const Term&) const = default;

    /// Structural order, for use as a map/set key. Not the SPARQL value order.
    bool operator<(const Term& o) const {
        return std::tie(kind_, value_, datatype_, lang_) <
               std::tie(o.kind_, o.value_, o.datatype_, o.lang_);
    }

private:
    static bool valid_lang_tag(const std::string& tag) {
        if (tag.empty()) return false;
        bool in_sub = false;
        for (size_t i = 0; i < tag.size(); ++i) {
            char c = tag[i];
            if (c == '-') {
                if (i == 0 || tag[i - 1] == '-' || i + 1 == tag.size()) return false;
                in_sub = true;
            } else if (in_sub ? !std::isalnum(static_cast<unsigned char>(c))
                              : !std::isalpha(static_cast<unsigned char>(c))) {
                return false;
            }
        }
        return true;
    }

    TermKind kind_ = TermKind::Iri;
    std::string value_;
    std::string datatype_;
    std::string lang_;
};

/// Escapes the characters N-Triples requires inside a quoted literal.
inline std::string escape_literal(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                static const char* hex = "0123456789ABCDEF";
                out += "\\u00";
                out.push_back(hex[c >> 4]);
                out.push_back(hex[c & 0x0F]);
            } else {
                out.push_back(static_cast<char>(c));
            }
        }
    }
    return out;
}

/// The N-Triples form of a term. xsd:string literals render without a
/// datatype suffix, which keeps serialization canonical.
inline std::string to_ntriples(const Term& t) {
    switch (t.kind()) {
    case TermKind::Iri:
        return "<" + t.value() + ">";
    case TermKind::BlankNode:
        return "_:" + t.value();
    case TermKind::Literal: {
        std::string out = "\"" + escape_literal(t.value()) + "\"";
        if (t.has_lang()) {
            out += "@" + t.lang();
        } else if (t.datatype() != vocab::xsd_string) {
            out += "^^<" + t.datatype() + ">";
        }
        return out;
    }
    }
    return {};
}

struct TermHash {
    size_t operator()(const Term& t) const {
        size_t h = std::hash<std::string>{}(t.value());
        h = h * 31 + std::hash<std::string>{}(t.datatype());
        h = h * 31 + std::hash<std::string>{}(t.lang());
        h = h * 31 + static_cast<size_t>(t.kind());
        return h;
    }
};

} // namespace fedql::rdf
