int ok_cond_alloc_cond_free(int c) {
    int *p = 0;
    if (c) {
        p = malloc(4);
        free(p);
        p = 0;
    }
    if (c) {
        free(p);
    }
    return 0;
}
