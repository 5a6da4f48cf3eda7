#include <cstdio>
int run_acceptance();
int main() { return run_acceptance(); }
