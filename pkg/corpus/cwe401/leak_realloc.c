int leak_realloc() {
    int *p = realloc(0, 8);
    p[0] = 2;
    return 0;
}
