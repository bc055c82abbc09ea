#pragma once

#include <string>

namespace cel {

// Porter stemming algorithm (Porter 1980), classic definition without the
// later "English/Porter2" revisions. Input must be lowercase ASCII letters.
class PorterStemmer {
public:
    static std::string stem(const std::string& word) {
        if (word.size() <= 2) return word;
        PorterStemmer s(word);
        s.step1a();
        s.step1b();
        s.step1c();
        s.step2();
        s.step3();
        s.step4();
        s.step5a();
        s.step5b();
        return s.b_;
    }

private:
    explicit PorterStemmer(std::string w) : b_(std::move(w)) {}

    std::string b_;

    bool is_consonant(std::size_t i) const {
        const char c = b_[i];
        switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !is_consonant(i - 1);
        default:
            return true;
        }
    }

    // Measure of the stem b_[0..end): number of VC sequences.
    std::size_t measure(std::size_t end) const {
        std::size_t n = 0;
        std::size_t i = 0;
        while (i < end && is_consonant(i)) ++i;
        while (i < end) {
            while (i < end && !is_consonant(i)) ++i;
            if (i >= end) break;
            ++n;
            while (i < end && is_consonant(i)) ++i;
        }
        return n;
    }

    bool has_vowel(std::size_t end) const {
        for (std::size_t i = 0; i < end; ++i)
            if (!is_consonant(i)) return true;
        return false;
    }

    bool double_consonant(std::size_t end) const {
        if (end < 2) return false;
        return b_[end - 1] == b_[end - 2] && is_consonant(end - 1);
    }

    // consonant-vowel-consonant ending where the final consonant is not w,x,y.
    bool cvc(std::size_t end) const {
        if (end < 3) return false;
        if (!is_consonant(end - 1) || is_consonant(end - 2) || !is_consonant(end - 3))
            return false;
        const char c = b_[end - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends_with(const char* suffix) const {
        const std::size_t n = std::char_traits<char>::length(suffix);
        if (n > b_.size()) return false;
        return b_.compare(b_.size() - n, n, suffix) == 0;
    }

    std::size_t stem_end(const char* suffix) const {
        return b_.size() - std::char_traits<char>::length(suffix);
    }

    // Replace `suffix` by `repl` if the stem before it has measure > m_min.
    bool replace_if_m(const char* suffix, const char* repl, std::size_t m_min) {
        if (!ends_with(suffix)) return false;
        const std::size_t end = stem_end(suffix);
        if (measure(end) > m_min) {
            b_.resize(end);
            b_ += repl;
        }
        return true;
    }

    void step1a() {
        if (ends_with("sses")) b_.resize(b_.size() - 2);
        else if (ends_with("ies")) b_.resize(b_.size() - 2);
        else if (ends_with("ss")) { /* keep */ }
        else if (ends_with("s")) b_.resize(b_.size() - 1);
    }

    void step1b() {
        if (ends_with("eed")) {
            if (measure(stem_end("eed")) > 0) b_.resize(b_.size() - 1);
            return;
        }
        bool stripped = false;
        if (ends_with("ed") && has_vowel(stem_end("ed"))) {
            b_.resize(stem_end("ed"));
            stripped = true;
        } else if (ends_with("ing") && has_vowel(stem_end("ing"))) {
            b_.resize(stem_end("ing"));
            stripped = true;
        }
        if (!stripped) return;
        if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
            b_ += 'e';
        } else if (double_consonant(b_.size())) {
            const char c = b_.back();
            if (c != 'l' && c != 's' && c != 'z') b_.resize(b_.size() - 1);
        } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
            b_ += 'e';
        }
    }

    void step1c() {
        if (ends_with("y") && has_vowel(b_.size() - 1))
            b_.back() = 'i';
    }

    void step2() {
        static const struct { const char* from; const char* to; } rules[] = {
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
            {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
            {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
            {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
            {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
            {"iviti", "ive"},   {"biliti", "ble"},
        };
        for (const auto& r : rules)
            if (replace_if_m(r.from, r.to, 0)) return;
    }

    void step3() {
        static const struct { const char* from; const char* to; } rules[] = {
            {"icate", "ic"}, {"ative", ""},  {"alize", "al"},
            {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""}, {"ness", ""},
        };
        for (const auto& r : rules)
            if (replace_if_m(r.from, r.to, 0)) return;
    }

    void step4() {
        static const char* suffixes[] = {
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant",
            "ement", "ment", "ent", "ion", "ou", "ism", "ate", "iti",
            "ous", "ive", "ize",
        };
        for (const char* s : suffixes) {
            if (!ends_with(s)) continue;
            const std::size_t end = stem_end(s);
            if (std::string(s) == "ion" && end > 0 &&
                b_[end - 1] != 's' && b_[end - 1] != 't')
                return;
            if (measure(end) > 1) b_.resize(end);
            return;
        }
    }

    void step5a() {
        if (!ends_with("e")) return;
        const std::size_t end = b_.size() - 1;
        const std::size_t m = measure(end);
        if (m > 1 || (m == 1 && !cvc(end)))
            b_.resize(end);
    }

    void step5b() {
        if (b_.size() >= 2 && b_.back() == 'l' && double_consonant(b_.size()) &&
            measure(b_.size()) > 1)
            b_.resize(b_.size() - 1);
    }
};

inline std::string porter_stem(const std::string& word) {
    return PorterStemmer::stem(word);
}

} // namespace cel
