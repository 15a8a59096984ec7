int ok_free_last() {
    int *p = malloc(4);
    p[0] = 1;
    free(p);
    return 0;
}
