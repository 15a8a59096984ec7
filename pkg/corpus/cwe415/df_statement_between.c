int df_statement_between() {
    int *p = malloc(4);
    int x;
    free(p);
    x = 1;
    free(p);
    return x;
}
