int ok_fresh_before_every_use(int c) {
    int *p = malloc(4);
    free(p);
    if (c) {
        p = malloc(8);
        *p = 1;
        free(p);
    }
    return 0;
}
