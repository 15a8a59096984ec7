int df_alias() {
    int *p = malloc(4);
    int *q;
    q = p;
    free(p);
    free(q);
    return 0;
}
