#include "fraclind/labels.hpp"

#include <cstdlib>

namespace fraclind {

std::string Labels::name(int g) const {
    if (g < N - 1) return "A" + std::to_string(g + 1);
    if (g == N - 1) return "B";
    if (g < 2 * N - 1) return "a" + std::to_string(g - N + 1);
    return "b";
}

int Labels::parse(const std::string& s) const {
    if (s == "B") return B();
    if (s == "b" || s == "beta") return beta();
    auto tail_index = [](const std::string& str, size_t prefixLen) -> int {
        if (str.size() <= prefixLen) return -1;
        for (size_t i = prefixLen; i < str.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(str[i]))) return -1;
        return std::atoi(str.c_str() + prefixLen);
    };
    if (s[0] == 'A') {
        int i = tail_index(s, 1);
        if (i >= 1 && i <= N - 1) return A(i - 1);
        return -1;
    }
    if (s.rfind("alpha", 0) == 0) {
        int i = tail_index(s, 5);
        if (i >= 1 && i <= N - 1) return alpha(i - 1);
        return -1;
    }
    if (s[0] == 'a') {
        int i = tail_index(s, 1);
        if (i >= 1 && i <= N - 1) return alpha(i - 1);
        return -1;
    }
    return -1;
}

}  // namespace fraclind
