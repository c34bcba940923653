#include <cstdio>

int main() {
    std::puts("gmtpp: placeholder");
    return 0;
}
