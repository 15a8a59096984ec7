int leak_two_allocs_one_free() {
    int *p = malloc(4);
    int *q = malloc(8);
    free(p);
    return 0;
}
