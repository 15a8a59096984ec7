int df_alias_chain() {
    int *p = malloc(4);
    int *q;
    int *r;
    q = p;
    r = q;
    free(p);
    free(r);
    return 0;
}
