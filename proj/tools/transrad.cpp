#include <cstdio>
int main() { std::puts("transrad: placeholder"); return 0; }
