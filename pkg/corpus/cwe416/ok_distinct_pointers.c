int ok_distinct_pointers() {
    int *p = malloc(4);
    int *q = malloc(4);
    free(p);
    *q = 1;
    free(q);
    return 0;
}
