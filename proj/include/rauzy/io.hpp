#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rauzy/balanced.hpp"
#include "rauzy/errors.hpp"
#include "rauzy/word.hpp"

namespace rauzy {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Substitution file: one rule per line, `<letter> -> <word>`, `#` starts a
/// comment, blank lines ignored. Alphabet order is the order of first
/// appearance of the left-hand letters.
inline Substitution parse_substitution(std::string_view text) {
    std::string letters;
    std::vector<Word> images;
    std::vector<std::size_t> rule_lines;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++line_no;
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const std::size_t arrow = line.find("->");
        if (arrow == std::string_view::npos) throw parse_error("expected '<letter> -> <word>'", line_no);
        const std::string_view lhs = detail::trim(line.substr(0, arrow));
        const std::string_view rhs = detail::trim(line.substr(arrow + 2));
        if (lhs.size() != 1) throw parse_error("left-hand side must be a single letter", line_no);
        if (rhs.empty()) throw parse_error("image word must be nonempty", line_no);
        for (char c : rhs)
            if (std::isspace(static_cast<unsigned char>(c)))
                throw parse_error("image word must not contain whitespace", line_no);
        if (letters.find(lhs[0]) != std::string::npos)
            throw parse_error(std::string("duplicate rule for letter '") + lhs[0] + "'", line_no);

        letters.push_back(lhs[0]);
        images.emplace_back(rhs);
        rule_lines.push_back(line_no);
    }

    if (letters.empty()) throw parse_error("no substitution rules found", line_no);
    for (std::size_t r = 0; r < images.size(); ++r)
        for (char c : images[r])
            if (letters.find(c) == std::string::npos)
                throw parse_error(std::string("letter '") + c + "' in an image has no rule", rule_lines[r]);

    return Substitution(Alphabet(letters), std::move(images));
}

inline Substitution read_substitution_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_substitution(buf.str());
}

inline std::string serialize_substitution(const Substitution& sigma) {
    std::string out;
    for (int i = 0; i < sigma.alphabet().size(); ++i) {
        out.push_back(sigma.alphabet().letter(i));
        out += " -> ";
        out += sigma.image(i);
        out.push_back('\n');
    }
    return out;
}

/// Morphism text format, LF line endings:
///   block <Name> = <top> | <bottom>     (discovery order)
///   phi <Name> -> <Name><Name>...
inline std::string format_morphism(const BlockMorphism& m) {
    std::string out;
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        out += "block " + m.names[i] + " = " + m.blocks[i].top + " | " + m.blocks[i].bottom + "\n";
    }
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        out += "phi " + m.names[i] + " -> " + m.phi_word(static_cast<int>(i)) + "\n";
    }
    return out;
}

/// Parsed morphism file content (names resolved back to block indices).
struct MorphismText {
    std::vector<std::string> names;
    std::vector<BalancedBlock> blocks;
    std::vector<std::vector<int>> phi;
};

/// Rule words concatenate names; a name is one capital letter, optionally
/// followed by digits (B26, B27, ... for indices past Z).
inline std::vector<int> parse_block_word(std::string_view word, const std::vector<std::string>& names,
                                         std::size_t line_no) {
    std::vector<int> out;
    std::size_t i = 0;
    while (i < word.size()) {
        std::size_t j = i + 1;
        while (j < word.size() && std::isdigit(static_cast<unsigned char>(word[j]))) ++j;
        const std::string name(word.substr(i, j - i));
        int idx = -1;
        for (std::size_t n = 0; n < names.size(); ++n)
            if (names[n] == name) { idx = static_cast<int>(n); break; }
        if (idx < 0) throw parse_error("unknown block name '" + name + "'", line_no);
        out.push_back(idx);
        i = j;
    }
    return out;
}

inline MorphismText parse_morphism(std::string_view text) {
    MorphismText out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++line_no;
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        line = detail::trim(line);
        if (line.empty()) continue;

        std::istringstream ss{std::string(line)};
        std::string kind, name, sep;
        ss >> kind >> name;
        if (kind == "block") {
            std::string top, bar, bottom;
            ss >> sep >> top >> bar >> bottom;
            if (sep != "=" || bar != "|" || top.empty() || bottom.empty())
                throw parse_error("expected 'block <Name> = <top> | <bottom>'", line_no);
            out.names.push_back(name);
            out.blocks.push_back(BalancedBlock{top, bottom});
        } else if (kind == "phi") {
            std::string word;
            ss >> sep >> word;
            if (sep != "->" || word.empty()) throw parse_error("expected 'phi <Name> -> <word>'", line_no);
            int idx = -1;
            for (std::size_t n = 0; n < out.names.size(); ++n)
                if (out.names[n] == name) { idx = static_cast<int>(n); break; }
            if (idx < 0) throw parse_error("phi rule for unknown block '" + name + "'", line_no);
            out.phi.resize(out.names.size());
            out.phi[static_cast<std::size_t>(idx)] = parse_block_word(word, out.names, line_no);
        } else {
            throw parse_error("expected a 'block' or 'phi' line", line_no);
        }
    }
    if (out.phi.size() != out.blocks.size())
        out.phi.resize(out.blocks.size());
    return out;
}

} // namespace rauzy
