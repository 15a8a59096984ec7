int df_use_between() {
    int *p = malloc(4);
    free(p);
    int v = 2;
    free(p);
    return v;
}
