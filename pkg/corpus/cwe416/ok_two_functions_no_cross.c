void ok_two_functions_no_cross_a(int *p) {
    free(p);
}
int ok_two_functions_no_cross_b() {
    int *q = malloc(4);
    *q = 1;
    free(q);
    return 0;
}
