int uaf_cond_free_then_use(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
    }
    int x = *p;
    return x;
}
