int uaf_use_in_predicate() {
    int *p = malloc(4);
    free(p);
    if (*p > 0) {
        return 1;
    }
    return 0;
}
