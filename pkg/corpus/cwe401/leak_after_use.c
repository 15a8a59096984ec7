int leak_after_use() {
    int *p = malloc(4);
    p[0] = 7;
    int v = p[0];
    return v;
}
