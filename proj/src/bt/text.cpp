#include "ee/bt/text.hpp"

#include <cctype>

namespace ee::bt {

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (c >= 0x80 || !std::isalnum(c)) continue;
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string render_template(std::string_view text, const Blackboard& blackboard) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            auto close = text.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto key = text.substr(i + 1, close - i - 1);
                if (auto v = blackboard.find(key)) {
                    out += to_string(*v);
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

}  // namespace ee::bt
