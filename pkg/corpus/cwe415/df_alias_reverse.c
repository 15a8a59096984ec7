int df_alias_reverse() {
    int *q;
    int *p = malloc(4);
    q = p;
    free(q);
    free(p);
    return 0;
}
