int df_triple() {
    int *p = malloc(4);
    free(p);
    free(p);
    free(p);
    return 0;
}
