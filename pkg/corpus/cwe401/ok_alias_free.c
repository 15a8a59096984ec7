int ok_alias_free() {
    int *p = malloc(4);
    int *q;
    q = p;
    free(q);
    return 0;
}
