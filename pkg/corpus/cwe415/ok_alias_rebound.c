int ok_alias_rebound() {
    int *p = malloc(4);
    int *q;
    q = p;
    free(p);
    q = malloc(8);
    free(q);
    return 0;
}
