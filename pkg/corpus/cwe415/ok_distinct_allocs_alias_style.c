int ok_distinct_allocs_alias_style() {
    int *p = malloc(4);
    int *q = malloc(8);
    free(q);
    free(p);
    return 0;
}
