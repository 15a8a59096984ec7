int ok_use_then_cond_free(int c) {
    int *p = malloc(4);
    *p = 2;
    if (c) {
        free(p);
        return 0;
    }
    free(p);
    return 1;
}
