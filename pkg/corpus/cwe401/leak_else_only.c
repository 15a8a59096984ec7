int leak_else_only(int c) {
    int *p = malloc(8);
    if (c) {
        p[0] = 1;
    } else {
        free(p);
    }
    return 0;
}
