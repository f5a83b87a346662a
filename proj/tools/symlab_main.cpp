#include <cstdio>
int main() { std::puts("symlab cli: not wired yet"); return 1; }
